from django.db import models


class SimulationRun(models.Model):
    """One recorded traversal of a pipe network"""
    label = models.CharField(max_length=200, blank=True)
    config_text = models.TextField()
    mu_deg = models.FloatField()
    dt_s = models.FloatField()
    path_length_mm = models.FloatField()
    total_time_s = models.FloatField()
    robot_speed_mm_s = models.FloatField()
    max_compression_mm = models.FloatField()
    worst_slip_mm = models.FloatField()
    worst_ape_percent = models.FloatField()
    flagged = models.BooleanField(default=False)
    created_at = models.DateTimeField(auto_now_add=True)

    def __str__(self):
        return f"{self.label or 'run'} (mu={self.mu_deg:g} deg, {self.total_time_s:.2f} s)"

    @property
    def mean_speed_mm_s(self):
        if not self.total_time_s:
            return 0.0
        return self.path_length_mm / self.total_time_s

    class Meta:
        ordering = ['-created_at']
