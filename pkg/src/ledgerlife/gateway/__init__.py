from .server import Gateway, create_app

__all__ = ["Gateway", "create_app"]
