"""Allow ``python -m epikin`` to behave like the console script."""

from .cli import main_entry

if __name__ == "__main__":
    main_entry()
