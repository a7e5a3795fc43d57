"""
Direct-form FIR convolution used as ground truth for every mapping.

y_k = sum_j x_{k-j} * w_j with zero history, the same zero-padding the
simulator applies to out-of-range bus indices.
"""

import logging
from collections.abc import Iterable, Sequence

import numpy as np

from app.schemas.plan import TapVector
from app.schemas.trace import ExtractedOutput
from app.schemas.verification import Mismatch, VerificationReport
from app.services.sim_engine import INT64_MAX, INT64_MIN, ArithmeticOverflowError

logger = logging.getLogger(__name__)


def _weights(w: TapVector | Sequence[int]) -> list[int]:
    if isinstance(w, TapVector):
        return list(w.weights)
    return [int(v) for v in w]


def _exact(x: list[int], w: list[int], count: int) -> list[int]:
    outputs = []
    for k in range(count):
        total = 0
        for j, weight in enumerate(w):
            if 0 <= k - j < len(x):
                total += x[k - j] * weight
        if not INT64_MIN <= total <= INT64_MAX:
            raise ArithmeticOverflowError(f"y_{k} = {total} leaves the int64 range")
        outputs.append(total)
    return outputs


def fir_reference(x: Sequence[int], w: TapVector | Sequence[int], count: int) -> list[int]:
    """
    Outputs y_0..y_{count-1} of the FIR filter w over samples x.

    Raises:
        ValueError: If count is negative or w is empty.
        ArithmeticOverflowError: If an output leaves the int64 range.
    """
    if count < 0:
        raise ValueError(f"count must be non-negative, got {count}")
    weights = _weights(w)
    if not weights:
        raise ValueError("At least one tap is required")
    samples = [int(v) for v in x]
    if count == 0 or not samples:
        return [0] * count

    max_x = max(abs(v) for v in samples)
    max_w = max(abs(v) for v in weights)
    if max_x * max_w * min(len(weights), len(samples)) > INT64_MAX:
        logger.debug("Oracle magnitude bound exceeded, falling back to exact integers")
        return _exact(samples, weights, count)

    full = np.convolve(np.asarray(samples, dtype=np.int64), np.asarray(weights, dtype=np.int64))
    outputs = [int(v) for v in full[:count]]
    outputs.extend([0] * (count - len(outputs)))
    return outputs


def verify_outputs(
    outputs: Iterable[ExtractedOutput],
    x: Sequence[int],
    w: TapVector | Sequence[int],
    trim_tail: bool = False,
) -> VerificationReport:
    """
    Compare every extracted output with the reference value at its index.

    Outputs are checked in the order given; the first disagreement is reported.
    """
    selected: list[ExtractedOutput] = []
    skipped = 0
    for output in outputs:
        if trim_tail and output.tail:
            skipped += 1
            continue
        selected.append(output)
    if not selected:
        return VerificationReport(ok=True, checked=0, skipped_tail=skipped)

    expected = fir_reference(x, w, max(o.output_index for o in selected) + 1)
    for output in selected:
        want = expected[output.output_index]
        if output.value != want:
            mismatch = Mismatch(
                cycle=output.cycle,
                row=output.row,
                col=output.col,
                output_index=output.output_index,
                expected=want,
                got=output.value,
            )
            logger.warning(f"Verification failed: {mismatch}")
            return VerificationReport(
                ok=False, checked=len(selected), skipped_tail=skipped, mismatch=mismatch
            )
    return VerificationReport(ok=True, checked=len(selected), skipped_tail=skipped)
