"""Ancilla-free certification of unitaries via Schur-Weyl duality."""

from .certification import (
    AcceptanceReport,
    BlowupReport,
    TesterKind,
    TesterPlan,
    accept_prob,
    accept_prob_known,
    accept_prob_swap,
    ancilla_requirement,
    blowup_report,
    plan,
)
from .characters import CharacterValue, character
from .partitions import Partition, dim_irrep, dim_multiplicity, enumerate_partitions, staircase_partition
from .tomography_risk import RiskProfile, plan_queries_tomography, risk_closed_form
from .unitary import EigenPhases, UnitaryMatrix, distance, eigenphases, haar_random

__version__ = "0.1.0"
