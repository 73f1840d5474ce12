from django.contrib import admin
from .models import SimulationRun


@admin.register(SimulationRun)
class SimulationRunAdmin(admin.ModelAdmin):
    list_display = ('label', 'mu_deg', 'total_time_s', 'robot_speed_mm_s', 'worst_ape_percent', 'flagged', 'created_at')
    list_filter = ('flagged', 'mu_deg', 'created_at')
    search_fields = ('label',)
    readonly_fields = ('created_at',)
