"""Arithmetic of reduced finitary power monoids over small finite monoids."""

from .census import enumerate_monoids, find_instances, run_census
from .classify import Verdict, classify, pm_is_umf_brute, pm_is_umf_theorem
from .monoid import FiniteMonoid, Magma, MonoidError, canonical_form, validate_monoid
from .pset import PowerMonoid, power_monoid
from .serialize import load_fixture, load_monoid

__version__ = "0.1.0"

__all__ = [
    "FiniteMonoid", "Magma", "MonoidError", "PowerMonoid", "Verdict",
    "canonical_form", "classify", "enumerate_monoids", "find_instances", "load_fixture",
    "load_monoid", "pm_is_umf_brute", "pm_is_umf_theorem", "power_monoid", "run_census",
    "validate_monoid",
]
