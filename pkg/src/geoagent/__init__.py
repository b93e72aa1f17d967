"""geoagent: an agentic NL-to-SQL assistant for spatio-temporal check-in data."""

__version__ = "0.1.0"
