import sys
from importlib import resources

from .errors import ConfigError

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib


def read(path, bundled: str) -> dict:
    """Parse ``path``, or the bundled ``data/<bundled>`` file when ``path`` is None."""
    if path is None:
        with (resources.files("culturality") / "data" / bundled).open("rb") as fh:
            return tomllib.load(fh)
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"{path}: no such file") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
