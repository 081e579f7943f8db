"""Congruence invariants of finite algebras: principal congruences with
chain witnesses, syntactic congruences, and term-set determination checks."""

from .algebra import FiniteAlgebra, Signature, format_alg, make_algebra, parse_alg, read_alg
from .analysis import (MalcevWitness, Verdict, check_dpsc_witness, determines_principal,
                       determines_principal_subcongruences, determines_syntactic, failing_link, syn,
                       theta_lower, theta_upper, verify_comp, verify_prop_3_2, verify_quotient_lemma,
                       verify_witness)
from .congruence import (CongruenceCertificate, all_congruences, generate_congruence, is_congruence,
                         monolith, quotient)
from .errors import InputError, PreconditionError, ResourceError
from .partition import Partition, parse_partition
from .qomega import check_sentence_1, check_sentence_2, depth_growth_experiment, make_qn, qn_congruence_report
from .relation import Relation
from .terms import (TermSet, TermX, Translation, compose_sets, elementary_terms, enumerate_terms,
                    parse_term, translation_monoid, translations)

__version__ = "0.1.0"
