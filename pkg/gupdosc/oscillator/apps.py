from django.apps import AppConfig


class OscillatorConfig(AppConfig):
    name = 'oscillator'
    verbose_name = 'GUP Dirac oscillator solver'
