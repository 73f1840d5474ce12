"""
URL configuration for pipeclimber_project project.

Only the admin is exposed, for browsing recorded simulation runs.
"""
from django.contrib import admin
from django.urls import path

urlpatterns = [
    path('admin/', admin.site.urls),
]
