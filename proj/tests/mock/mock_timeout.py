#!/usr/bin/env python3
"""Stand-in SMT solver that never answers, for timeout handling tests."""
import sys
import time

sys.stdin.read()
time.sleep(600)
