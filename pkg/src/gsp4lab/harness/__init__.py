"""Datasets, equidistribution reports, error budgets and invariant suites."""
