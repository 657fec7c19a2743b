#!/usr/bin/env python3
"""Stand-in SMT solver answering with algebraic and decimal value forms.

Assigns to every requested symbol the square root of 1/2, written as a
root-obj expression (the second real root of 2x^2 - 1), except symbols whose
name ends with "_dec", which get the decimal approximation 0.7071067811?
that some solvers print for irrationals.
"""
import re
import sys

text = sys.stdin.read()
m = re.search(r"\(get-value\s*\(([^)]*)\)\)", text)
symbols = m.group(1).split() if m else []
print("sat")
parts = []
for s in symbols:
    if s.endswith("_dec"):
        parts.append("({} 0.7071067811?)".format(s))
    else:
        parts.append("({} (root-obj (+ (* 2 (^ x 2)) (- 1)) 2))".format(s))
if parts:
    print("({})".format(" ".join(parts)))
