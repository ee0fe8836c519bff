"""Session-level interface: configuration, the cart, and one engine facade
shared by the command line and the HTTP service."""

from .cart import Cart, CartItem, CartPurpose
from .config import DEFAULT_PORT, SessionConfig, load_config
from .engine import Engine
from .service import create_app

__all__ = [
    "Cart",
    "CartItem",
    "CartPurpose",
    "DEFAULT_PORT",
    "Engine",
    "SessionConfig",
    "create_app",
    "load_config",
]
