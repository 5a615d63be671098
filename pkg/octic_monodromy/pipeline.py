"""
Stage orchestration: amodel -> transport -> snap -> cones -> fan.

Stages that need integral monodromies but run without the transport and snap stages use
the printed reference matrices; the report's provenance block says which source was used.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Callable, Dict, List, Optional

import mpmath
import numpy as np
import sympy

from .amodel import Q_FORM, hosono_basis, pairing_matrix
from .config import RunConfig, selected_loops
from .errors import OcticError, SnapFailure
from .fanchecker import INCONCLUSIVE, NO_INTERSECTION, full_report, search_all
from .frobenius import mum_monodromies
from .gaussmanin import local_monodromy_from_residue
from .lmhs import build_cones, hodge_diamond, jordan_partition, log_unipotent
from .loops import LoopSpec
from .mirrormap import basis_change, snap_integral, solve_R
from .reference import (
    CONE_GENERATORS,
    CONE_TYPES,
    DEGENERATE,
    FIRST_LIST,
    GENERATOR_LABELS,
    NILPOTENT_LOGS,
    P2,
    R_PRINTED,
    S_CON1,
    S_M1,
    S_M2,
    SECOND_LIST,
)
from .report import Report
from .scalarfield import ExactScalar, scalar_eval
from .symplectic import is_symplectic
from .transport import MonodromyEstimate, determinant_residual, form_residual, monodromy

logger = logging.getLogger(__name__)

# 1 / (2 i pi^3), the normalization of the Yukawa couplings
YUKAWA_CONSTANT = ExactScalar({(-1, -3): Fraction(1, 2)})

ProgressCallback = Callable[[str, int, int], None]


def _numeric(matrix) -> np.ndarray:
    return np.array(sympy.Matrix(matrix).tolist(), dtype=complex)


def _degenerate_checks(reference: str, matrix: sympy.Matrix) -> Dict[str, bool]:
    """Relations of the monodromies that do not span two-dimensional cones."""
    if reference == "T_C0":
        return {"order_4": matrix ** 4 == sympy.eye(6)}
    if reference == "T_D(1,-1)":
        return {"square_is_T_m1": matrix ** 2 == FIRST_LIST["T_m1"]}
    if reference == "T_D(1,-2)":
        return {"identity": matrix == sympy.eye(6)}
    return {}


class MonodromyPipeline:
    """
    Runs the requested stages in dependency order and collects a Report.

    A stage error is recorded in report.failures with its stage tag; stages that depend on
    the failed one are skipped and the others still run.
    """

    def __init__(self, config: RunConfig,
                 progress_callback: Optional[ProgressCallback] = None,
                 should_continue: Optional[Callable[[], bool]] = None):
        self.config = config
        self.progress_callback = progress_callback
        self.should_continue = should_continue
        self.report = Report(config=config.to_dict())
        self.estimates: Dict[str, MonodromyEstimate] = {}
        self.loops: Dict[str, LoopSpec] = {}
        self.integral: Dict[str, sympy.Matrix] = {}
        self.cancelled = False
        self._failed_stages: List[str] = []

    def _continue(self) -> bool:
        if self.should_continue is not None and not self.should_continue():
            self.cancelled = True
            return False
        return True

    def _progress(self, stage: str, done: int, total: int):
        if self.progress_callback:
            self.progress_callback(stage, done, total)

    def run(self) -> Report:
        stages = {
            "amodel": self.run_amodel,
            "transport": self.run_transport,
            "snap": self.run_snap,
            "cones": self.run_cones,
            "fan": self.run_fan,
        }
        for name in self.config.stages:
            if not self._continue():
                logger.info(f"Run cancelled before stage {name}")
                break
            if name == "snap" and "transport" in self._failed_stages:
                logger.warning("Skipping snap stage: transport stage failed")
                self.report.failures.append({"stage": "snap", "error": "Skipped",
                                             "message": "transport stage failed"})
                continue
            logger.info(f"Stage {name}: start")
            try:
                stages[name]()
            except OcticError as e:
                logger.error(f"Stage {name} failed: {e}")
                self._failed_stages.append(name)
                self.report.add_failure(name, e)
                continue
            logger.info(f"Stage {name}: done")
        return self.report

    # amodel ---------------------------------------------------------------------------------

    def run_amodel(self):
        c11 = self.config.c11
        pairing = pairing_matrix(hosono_basis(c11))
        t1, t2 = mum_monodromies(c11)
        residues = {label: local_monodromy_from_residue(divisor)
                    for label, divisor in (("S_m1", "z1"), ("S_m2", "z2"))}
        result = {
            "c11": c11,
            "pairing": pairing,
            "pairing_is_minus_Q": pairing == -Q_FORM,
            "T_m1": t1,
            "T_m2": t2,
            "mum_commute": t1 * t2 == t2 * t1,
            "mum_symplectic": is_symplectic(t1) and is_symplectic(t2),
            "residue_monodromies": residues,
            "residues_match_printed": residues["S_m1"] == S_M1 and residues["S_m2"] == S_M2,
            "yukawa_constant": self._working_precision(YUKAWA_CONSTANT),
        }
        if c11 == 0:
            result["mum_match_first_list"] = (t1 == FIRST_LIST["T_m1"]
                                              and t2 == FIRST_LIST["T_m2"])
        self.report.add_stage("amodel", result)
        self._progress("amodel", 1, 1)

    def _working_precision(self, value: ExactScalar) -> List[str]:
        """[re, im] decimal strings carrying every digit of the configured precision."""
        z = scalar_eval(value, self.config.precision)
        digits = int(self.config.precision * math.log10(2))
        return [mpmath.nstr(z.real, digits), mpmath.nstr(z.imag, digits)]

    # transport ------------------------------------------------------------------------------

    def _transport_one(self, loop: LoopSpec) -> MonodromyEstimate:
        return monodromy(loop, self.config.steps, self.config.method, self.config.max_error,
                         self.config.precision)

    def run_transport(self):
        loops = selected_loops(self.config)
        results = {}
        total = len(loops)

        def record(loop: LoopSpec, estimate: MonodromyEstimate):
            self.estimates[loop.label] = estimate
            self.loops[loop.label] = loop
            results[loop.label] = {
                "matrix": estimate.matrix,
                "error_bound": estimate.error_bound,
                "steps": estimate.steps,
                "method": estimate.method,
                "reconstructed": estimate.reconstructed,
                "form_residual": form_residual(estimate, loop.base),
                "determinant_residual": determinant_residual(estimate),
            }
            self._progress("transport", len(results), total)

        def failed(loop: LoopSpec, error: OcticError):
            logger.error(f"Transport of {loop.label} failed: {error}")
            self.report.add_failure("transport", error)

        if self.config.threads > 1:
            with ThreadPoolExecutor(max_workers=self.config.threads) as pool:
                futures = []
                for loop in loops:
                    if not self._continue():
                        logger.info(f"Transport cancelled before loop {loop.label}")
                        break
                    futures.append((loop, pool.submit(self._transport_one, loop)))
                for loop, future in futures:
                    if not self._continue() and future.cancel():
                        logger.info(f"Transport of {loop.label} cancelled")
                        continue
                    try:
                        record(loop, future.result())
                    except OcticError as e:
                        failed(loop, e)
        else:
            for loop in loops:
                if not self._continue():
                    logger.info(f"Transport cancelled before loop {loop.label}")
                    break
                try:
                    record(loop, self._transport_one(loop))
                except OcticError as e:
                    failed(loop, e)

        self.report.add_stage("transport", {"loops": dict(sorted(results.items()))})

    # snap -----------------------------------------------------------------------------------

    def run_snap(self):
        if "con1" in self.estimates:
            s_con1, source = self.estimates["con1"].matrix, "computed"
        else:
            s_con1, source = S_CON1, "printed S_con1"
            logger.warning("Loop con1 was not transported; fixing R from the printed S_con1")
        intertwining = {}
        for label in ("l1", "l2"):
            if label in self.estimates:
                reference = self.loops[label].reference
                intertwining[reference] = (_numeric(FIRST_LIST[reference]),
                                           self.estimates[label].matrix)
        r = solve_R(s_con1, self.config.c11, intertwining)
        if self.config.c11 == 0:
            r.diagnostics["printed_distance"] = float(np.max(np.abs(r.matrix - R_PRINTED)))
        snapped = {}
        for label, estimate in sorted(self.estimates.items()):
            loop = self.loops[label]
            if loop.reference is None:
                continue
            try:
                result = snap_integral(label, estimate.matrix, r.matrix)
            except SnapFailure as e:
                logger.error(f"Snapping {label} failed: {e}")
                self.report.add_failure("snap", e)
                continue
            powered = result.matrix ** loop.reference_power
            entry = {
                "matrix": result.matrix,
                "distance": result.distance,
                "quasi_unipotent": list(result.quasi_indices),
                "reference": loop.reference,
                "reference_power": loop.reference_power,
            }
            if loop.reference in FIRST_LIST:
                converted = basis_change(powered, P2)
                entry["matches_first_list"] = powered == FIRST_LIST[loop.reference]
                entry["second_list"] = converted
                entry["matches_second_list"] = converted == SECOND_LIST[loop.reference]
                self.integral[loop.reference] = converted
            elif loop.reference in DEGENERATE:
                entry["matches_printed"] = powered == DEGENERATE[loop.reference]
                entry["checks"] = _degenerate_checks(loop.reference, powered)
            snapped[label] = entry
        self.report.add_stage("snap", {
            "R": {
                "free_entries": r.free_entries(),
                "matrix": r.matrix,
                "integer_targets": r.targets,
                "diagnostics": r.diagnostics,
                "S_con1_source": source,
            },
            "matrices": snapped,
        })
        self._progress("snap", 1, 1)

    # cones ----------------------------------------------------------------------------------

    def _unipotents(self) -> Dict[str, sympy.Matrix]:
        unipotents = {}
        for label in GENERATOR_LABELS.values():
            unipotents[label] = self.integral.get(label, SECOND_LIST[label])
        return unipotents

    def run_cones(self):
        unipotents = self._unipotents()
        computed = sorted(label for label in unipotents if label in self.integral)
        nilpotents = {name: log_unipotent(unipotents[label])
                      for name, label in GENERATOR_LABELS.items()}
        cones = build_cones(nilpotents, CONE_GENERATORS)
        types = sorted({t for cone in cones.values() for t in cone.types})
        result = {
            "nilpotents": nilpotents,
            "nilpotents_match_printed": {name: nilpotents[name] == NILPOTENT_LOGS[name]
                                         for name in nilpotents},
            "partitions": {name: list(jordan_partition(n)) for name, n in nilpotents.items()},
            "cones": {
                name: {
                    "generators": [cone.left, cone.right],
                    "types": list(cone.types),
                    "label": cone.label(),
                    "matches_printed": cone.types == CONE_TYPES[name],
                    "weight_dims": list(cone.filtration.dims()),
                }
                for name, cone in cones.items()
            },
            "hodge_diamonds": {t: hodge_diamond(t) for t in types},
        }
        source = "computed" if len(computed) == len(unipotents) else (
            "printed" if not computed else f"computed for {', '.join(computed)}; printed otherwise")
        self.report.add_stage("cones", result, source)
        self._progress("cones", 1, 1)

    # fan ------------------------------------------------------------------------------------

    def run_fan(self):
        verdicts = full_report(progress_callback=self.progress_callback,
                               should_continue=self.should_continue)
        result = {
            "verdicts": {v.case_id: v for v in verdicts},
            "all_no_intersection": bool(verdicts) and all(v.result == NO_INTERSECTION
                                                           for v in verdicts),
        }
        if self.config.search_trials > 0:
            searches = search_all(self.config.search_level, self.config.search_word_length,
                                  self.config.search_trials, self.config.seed,
                                  should_continue=self.should_continue)
            result["search"] = {f"{s.left}x{s.right}": s for s in searches}
            result["search_counterexamples"] = sum(len(s.counterexamples) for s in searches)
        self.report.add_stage("fan", result, "reference cones")
        for verdict in verdicts:
            if verdict.result == INCONCLUSIVE:
                self.report.failures.append({"stage": "fan", "error": "InconclusiveCase",
                                             "message": verdict.evidence[-1].claim,
                                             "case_id": verdict.case_id})


def run(config: RunConfig, progress_callback: Optional[ProgressCallback] = None,
        should_continue: Optional[Callable[[], bool]] = None) -> Report:
    return MonodromyPipeline(config, progress_callback, should_continue).run()
