#!/usr/bin/env python3
"""Entry point script for the calibration toolkit."""

from edcal.main import main

if __name__ == "__main__":
    exit(main())
