import os


def _envFlag(name: str, default: bool) -> bool:
    value = os.environ.get(name)
    if value is None:
        return default
    return value.strip().lower() in ("1", "true", "yes", "on")


def _envInt(name: str, default: int) -> int:
    value = os.environ.get(name)
    if value is None or not value.strip().isdigit():
        return default
    return max(1, int(value))


class Settings:
    """Process wide switches.

    `checkFinite` is the debug/test configuration: counted primitives verify their
    outputs and raise `NumericalOverflow` on NaN/Inf. Release runs leave it off.
    """

    def __init__(self) -> None:
        self.checkFinite = _envFlag("MIMODET_CHECK_FINITE", False)
        self.threads = _envInt("MIMODET_THREADS", 1)

    def __repr__(self) -> str:
        return f"<Settings checkFinite={self.checkFinite} threads={self.threads}>"


settings = Settings()
