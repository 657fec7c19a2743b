#!/usr/bin/env python3
"""Stand-in SMT solver: answers sat and assigns 1/2 to every requested symbol.

Reads SMT-LIB2 from stdin, finds the (get-value (...)) command, and prints a
model giving each listed symbol the value (/ 1 2).  Useful for exercising the
solver-client plumbing on problems where the all-1/2 point is a solution.
"""
import re
import sys

text = sys.stdin.read()
m = re.search(r"\(get-value\s*\(([^)]*)\)\)", text)
symbols = m.group(1).split() if m else []
print("sat")
if symbols:
    pairs = " ".join("({} (/ 1 2))".format(s) for s in symbols)
    print("({})".format(pairs))
