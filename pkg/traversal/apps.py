from django.apps import AppConfig


class TraversalConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'traversal'
