from django.apps import AppConfig


class PipeGeometryConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'pipe_geometry'
