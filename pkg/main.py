#!/usr/bin/env python
"""
Main entry point for the NWS toolkit.
"""
import sys

from nwskit.cli import run


def main():
    """Main entry point."""
    return run(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
