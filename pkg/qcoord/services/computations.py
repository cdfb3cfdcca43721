import itertools
import logging
from enum import Enum
from typing import Optional

from qcoord.algebra.detloc import check_central, check_identities, check_iso, quantum_determinant
from qcoord.algebra.expr import parse_element
from qcoord.algebra.frobext import check_frobenius, check_nakayama, nakayama, phi
from qcoord.algebra.rewrite import Element, check_confluence
from qcoord.algebra.rootspec import check_module, enumerate_basis, module_expand
from qcoord.core.config import settings
from qcoord.core.exceptions import ParameterError
from qcoord.core.log_config import logging_settings
from qcoord.schemas.elements import (
    BasisOut,
    ClassicalOut,
    ElementOut,
    ExpansionEntry,
    ExpansionOut,
    TermOut,
)
from qcoord.schemas.reports import CheckReport
from qcoord.schemas.run_config import RunConfig

logger = logging.getLogger(logging_settings.LOGGER_NAME)


class CheckName(str, Enum):
    CENTRAL = "central"
    PBW_CONFLUENCE = "pbw-confluence"
    FROBENIUS = "frobenius"
    NAKAYAMA = "nakayama"
    ISO = "iso"
    IDENTITIES = "identities"
    MODULE = "module"


def _require_ell(run: RunConfig, what: str) -> RunConfig:
    if run.ell is None:
        raise ParameterError(f"{what} needs a root order (--ell)")
    return run


def element_out(element: Element, run: RunConfig) -> ElementOut:
    """
    Serialize a reduced element with its canonical term order.
    """
    order = element.config.order
    return ElementOut(
        n=run.n,
        variant=run.variant.value,
        ell=run.ell,
        order=run.order.value,
        value=str(element),
        terms=[
            TermOut(
                monomial=monomial.format(order),
                coefficient=str(coeff),
                exponents=list(monomial.exps),
                dpower=monomial.dpower,
            )
            for monomial, coeff in element.items()
        ],
    )


def normal_form(expr: str, run: RunConfig) -> Element:
    """
    Parse an expression and reduce it to the basis of the run's algebra.
    """
    return parse_element(expr, run.algebra_config())


def multiply_expressions(left: str, right: str, run: RunConfig) -> Element:
    """
    Multiply two parsed expressions, left times right.
    """
    config = run.algebra_config()
    return parse_element(left, config) * parse_element(right, config)


def determinant(run: RunConfig) -> Element:
    return quantum_determinant(run.n, run.algebra_config())


def expand_expression(expr: str, run: RunConfig) -> ExpansionOut:
    """
    Expand an element over the classical coordinate ring.
    """
    _require_ell(run, "expand")
    expansion = module_expand(normal_form(expr, run))
    return ExpansionOut(
        ell=run.ell,
        n=run.n,
        variant=run.variant.value,
        entries=[
            ExpansionEntry(basis_key=key.format(expansion.config.order), classical_coeff=str(poly))
            for key, poly in expansion.items()
        ],
    )


def phi_expression(expr: str, run: RunConfig) -> ClassicalOut:
    _require_ell(run, "phi")
    value = phi(normal_form(expr, run))
    return ClassicalOut(ell=run.ell, n=run.n, variant=run.variant.value, value=str(value))


def nakayama_expression(expr: str, run: RunConfig) -> Element:
    return nakayama(normal_form(expr, run))


def basis_keys(run: RunConfig, limit: Optional[int] = None) -> BasisOut:
    """
    List the module basis keys, optionally only the first `limit` of them.
    """
    _require_ell(run, "basis")
    if limit is not None and limit < 0:
        raise ParameterError(f"limit must be non-negative, got {limit}")
    keys = enumerate_basis(run.n, run.ell, run.variant)
    shown = [key.format() for key in itertools.islice(keys, limit)]
    return BasisOut(
        ell=run.ell,
        n=run.n,
        variant=run.variant.value,
        count=run.ell ** (run.n * run.n),
        keys=shown,
    )


def run_check(name: CheckName, run: RunConfig) -> CheckReport:
    """
    Run one verification suite. Suites over O_eps fall back to DEFAULT_ELL.
    """
    ell = run.ell if run.ell is not None else settings.DEFAULT_ELL
    variant = run.variant
    logger.info(f"Running check {name.value} for n={run.n}")
    if name == CheckName.CENTRAL:
        return check_central(run.n)
    if name == CheckName.PBW_CONFLUENCE:
        return check_confluence(run.n, settings.CONFLUENCE_MAX_LENGTH, run.ell)
    if name == CheckName.FROBENIUS:
        return check_frobenius(run.n, ell, variant)
    if name == CheckName.NAKAYAMA:
        return check_nakayama(run.n, ell, variant)
    if name == CheckName.ISO:
        return check_iso(run.n)
    if name == CheckName.IDENTITIES:
        return check_identities(run.n)
    return check_module(run.n, ell, variant)
