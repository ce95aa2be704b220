from .config import RunConfig, load_config
from .main import main

__all__ = ["RunConfig", "load_config", "main"]
