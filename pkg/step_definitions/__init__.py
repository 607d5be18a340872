"""Step definitions package initialization."""
