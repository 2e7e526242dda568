"""Allow `python -m terrarank`."""

from .cli import main

main()
