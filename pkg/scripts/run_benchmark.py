#!/usr/bin/env python3
"""Run the full benchmark harness on a config and print the summary.

Usage:
    python scripts/run_benchmark.py configs/desk.json out/desk --iters 20000
Extra arguments are forwarded to `circlebin bench`.
"""

import sys

from circlebin.cli import main

if __name__ == "__main__":
    if len(sys.argv) < 3:
        print(__doc__.strip(), file=sys.stderr)
        sys.exit(1)
    sys.exit(main(["bench", *sys.argv[1:]]))
