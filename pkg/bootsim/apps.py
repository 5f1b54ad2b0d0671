from django.apps import AppConfig


class BootsimConfig(AppConfig):
    name = 'bootsim'
    verbose_name = 'Bootstrap validity simulator'
