from .client import HttpClient, InProcessClient
from .core import FilterConfig, MetricsResponse, Provider, QuotaError, provider_new
from .service import build_app, serve

__all__ = [
    "FilterConfig", "MetricsResponse", "Provider", "QuotaError",
    "provider_new", "build_app", "serve", "HttpClient", "InProcessClient",
]
