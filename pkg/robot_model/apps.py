from django.apps import AppConfig


class RobotModelConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'robot_model'
