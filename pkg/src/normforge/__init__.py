"""normforge: statutory norms with their pragmatic context, linted and reasoned over."""

__version__ = "0.1.0"
