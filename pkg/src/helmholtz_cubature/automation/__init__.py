from .runner import CubatureRunner

__all__ = ["CubatureRunner"]
