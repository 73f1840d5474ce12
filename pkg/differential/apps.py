from django.apps import AppConfig


class DifferentialConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'differential'
