"""Allow `python -m stablevol` to behave like the `stablevol` script."""

from .cli import main_entry

main_entry()
