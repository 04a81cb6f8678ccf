import os

THREADS_ENV = "FERMIDECO_THREADS"


def default_workers() -> int:
    """Worker threads from ``FERMIDECO_THREADS`` (default 1)."""
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1
