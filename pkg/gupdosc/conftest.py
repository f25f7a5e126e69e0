import os

import django


os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'gupdosc.settings')
django.setup()
