"""Runtime helpers: packaged settings, metrics and bootstrap."""
