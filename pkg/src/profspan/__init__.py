"""Exact combinatorics of span categories and Mackey functors for finite
groups and truncated quotient towers.

Submodules:
  groups   finite groups, subgroup lattices, quotient maps, towers
  gsets    finite G-sets, inflation/fixed points, capped categories
  fincat   explicit finite categories, chain (co)limits, functor families
  spans    span (Burnside) categories with exact multiset arithmetic
  mackey   Mackey functors over integral abelian-group presentations
  formats  line-based text formats with bit-exact round trips
  verify   theorem-level verification reports
  cli      command-line entry point
"""

__version__ = "0.1.0"
