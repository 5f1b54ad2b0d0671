"""Pytest wiring: configure Django the same way manage.py does so the SimpleTestCase suites can run."""
import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'randboot.settings')
django.setup()
