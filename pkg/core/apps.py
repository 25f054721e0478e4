from django.apps import AppConfig
import logging

logger = logging.getLogger(__name__)


class CoreConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "core"
    verbose_name = "Compact ILP core"

    def ready(self):
        from core.protocols import registry

        logger.debug(f"Protocols registered: {', '.join(sorted(registry.PROTOCOLS))}")
