"""Django project package for compact-ilp."""
