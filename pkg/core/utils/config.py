"""
Access to project settings from library code.

Library modules are usable without ``django.setup()``; when Django settings are
not configured the supplied default is returned.
"""

from typing import Any

from django.conf import settings


def setting(name: str, default: Any) -> Any:
    """
    Read a project setting, falling back to ``default``.

    Args:
        name: Settings attribute name, e.g. ``COMPACT_ILP_BUDGET_MS``
        default: Value used when the setting is absent or settings are not configured

    Returns:
        The configured value or the default
    """
    if not settings.configured:
        return default
    return getattr(settings, name, default)
