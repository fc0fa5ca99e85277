"""Exact stage construction of a highly transitive overgroup of G0 + Z acting on itself."""

from forge.ambient import Ambient, Point
from forge.base_group import parse_base
from forge.config import Config, load_config
from forge.construction import Certificate, build_stages, verify_certificate
from forge.limit import limit_apply, word_problem
from forge.mif import escape_certificate, mif_scan, pi_closure
from forge.transitivity import TransitivityEngine, trim, witness

__all__ = [
    "Ambient", "Certificate", "Config", "Point", "TransitivityEngine", "build_stages",
    "escape_certificate", "limit_apply", "load_config", "mif_scan", "parse_base", "pi_closure",
    "trim", "verify_certificate", "witness", "word_problem",
]
