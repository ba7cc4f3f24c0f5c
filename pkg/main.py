#!/usr/bin/env python3
"""
PGA instruction sequence toolkit
Command-line entry point
"""

import sys

from src.cli import run


def main():
    """Main application entry point"""
    sys.exit(run(sys.argv[1:]))


if __name__ == '__main__':
    main()
