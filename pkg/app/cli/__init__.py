from app.cli.routes import build_parser

__all__ = ["build_parser"]
