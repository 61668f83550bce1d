from .app import create_app, load_config, main

__all__ = ["create_app", "load_config", "main"]
