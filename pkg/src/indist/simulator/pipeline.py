"""End-to-end expected distributions: source, circuit, loss, detection, post-selection."""
from __future__ import annotations

from ..core import MixtureModel, OutputDistribution
from .circuit import DetectionSpec, InterferometerSpec, SourceSpec
from .detection import apply_losses_and_detection
from .evolve import evolve_mixture, make_evolver
from .postselect import Postselection, postselect

NOISE_LEVELS = ("none", "full")


def raw_distribution(
    model: MixtureModel,
    spec: InterferometerSpec,
    source: SourceSpec | None = None,
    detection: DetectionSpec | None = None,
    noise: str = "none",
) -> OutputDistribution:
    """Distribution before post-selection.

    ``noise="none"``: the one-photon-per-input state through the lossless
    circuit, keyed by occupation.  ``noise="full"``: every emission term
    weighted by its pair-generation probability, lossy evolution and
    detection, keyed by 12-entry click patterns and normalised over the
    emitted terms.
    """
    source = source or SourceSpec()
    if noise == "none":
        return evolve_mixture(spec.without_loss(), source.main_input(spec.mode_count), model, source)
    if noise != "full":
        raise ValueError(f"noise must be one of {NOISE_LEVELS}, got {noise!r}")
    detection = detection or DetectionSpec()
    evolver = make_evolver(spec, lossy=True)
    acc = OutputDistribution()
    weight_sum = 0.0
    for w, occ in source.emission_terms(spec.mode_count):
        d = evolve_mixture(spec, occ, model, source, lossy=True, evolver=evolver)
        acc = acc + apply_losses_and_detection(d, detection).scaled(w)
        weight_sum += w
    return acc.scaled(1.0 / weight_sum)


def expected_postselection(
    model: MixtureModel,
    spec: InterferometerSpec,
    source: SourceSpec | None = None,
    detection: DetectionSpec | None = None,
    noise: str = "none",
) -> Postselection:
    source = source or SourceSpec()
    raw = raw_distribution(model, spec, source, detection, noise)
    return postselect(raw, spec, source)


def expected_distribution(
    model: MixtureModel,
    spec: InterferometerSpec,
    source: SourceSpec | None = None,
    detection: DetectionSpec | None = None,
    noise: str = "none",
    postselected: bool = True,
) -> OutputDistribution:
    """The model's predicted p^e, post-selected by default."""
    if postselected:
        return expected_postselection(model, spec, source, detection, noise).distribution
    return raw_distribution(model, spec, source, detection, noise)
