"""Exact CM fibers of the modular curves X_0(M,N) and X_1(M,N)."""

from .classfields import FieldLabel, K, Q, Spectrum
from .errors import (
    CmError,
    DomainError,
    InvariantError,
    ResourceError,
    UnsupportedCaseError,
    UsageError,
)
from .fiberengine import x0_degrees, x0_general, x0_prime_power, x0_two_level, x1_degrees
from .isogtools import UNBOUNDED, cyclic_over_Qf, is_square_mod, k_rational_max, kwon_m
from .oddcm import d_odd_cm, odd_cm_report, primitive_odd_degree
from .primdeg import primitive_compile, primitive_x1
from .quadarith import class_group, class_number, split_discriminant
from .volcano import VolcanoParams, build_volcano, spectrum_oracle

__version__ = "0.1.0"
