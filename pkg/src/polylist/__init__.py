"""Finite set-model checks for list objects, truncated arithmetic and the
universal property of ``nth``."""

from .arith import ArithOps, nno_rec, run_arith_laws
from .listobj import ListOps, list_build, list_rec, run_list_laws, seq_build
from .polyadj import (
    Instance,
    brute_force_solutions,
    construct_h,
    nth_arrow,
    run_poly_laws,
    uniqueness_by_theory,
    verify_solution,
)
from .report import LawReport, LawResult
from .setmodel import (
    NAT,
    NIL,
    STAR,
    UNIT,
    Arrow,
    Budget,
    FinSet,
    ListOf,
    Prod,
    Seq,
    Sub,
    arrows_equal,
    enumerate_obj,
)
from .slices import PolyDiagram, delta_f, list_polynomial, pi_f, poly_extension, sigma_f

__all__ = [
    "ArithOps",
    "nno_rec",
    "run_arith_laws",
    "ListOps",
    "list_build",
    "list_rec",
    "run_list_laws",
    "seq_build",
    "Instance",
    "brute_force_solutions",
    "construct_h",
    "nth_arrow",
    "run_poly_laws",
    "uniqueness_by_theory",
    "verify_solution",
    "LawReport",
    "LawResult",
    "NAT",
    "NIL",
    "STAR",
    "UNIT",
    "Arrow",
    "Budget",
    "FinSet",
    "ListOf",
    "Prod",
    "Seq",
    "Sub",
    "arrows_equal",
    "enumerate_obj",
    "PolyDiagram",
    "delta_f",
    "list_polynomial",
    "pi_f",
    "poly_extension",
    "sigma_f",
]

__version__ = "0.1.0"
