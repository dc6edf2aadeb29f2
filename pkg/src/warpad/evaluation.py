"""Dataset manifests, batch evaluation, AUROC, corruption runs, and sweeps."""

from __future__ import annotations

import csv
import hashlib
import json
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .embedder import Embedder, make_embedder
from .errors import ConfigurationError, IngestionError, ValidationError
from .imageops import CorruptionSpec, corrupt, load_image
from .scoring import (
    AGGREGATIONS,
    DetectorConfig,
    ScoreRecord,
    canonical_json,
    variant,
    warpad_score,
    write_score_records,
)
from .wavelet import WaveletSpec

SWEEP_AXES = ("alpha", "d_rescale", "d_patch", "wavelet", "level", "aggregation", "corruption")
REAL_LABEL = "real"


@dataclass(frozen=True)
class DatasetManifest:
    """One benchmark: a shared real set plus per-generator fake sets."""

    name: str
    real: tuple
    fake: tuple  # (path, generator) pairs
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.real:
            raise ValidationError("manifest has no real images")
        if not self.fake:
            raise ValidationError("manifest has no fake images")
        paths = list(self.real) + [p for p, _ in self.fake]
        if len(set(paths)) != len(paths):
            dupe = next(p for p in paths if paths.count(p) > 1)
            raise ValidationError(f"manifest lists {dupe!r} more than once")

    @property
    def generators(self) -> list:
        seen = []
        for _, gen in self.fake:
            if gen not in seen:
                seen.append(gen)
        return seen

    @classmethod
    def load(cls, path) -> "DatasetManifest":
        base = os.path.dirname(os.path.abspath(path))
        try:
            with open(path) as fh:
                raw = json.load(fh)
        except FileNotFoundError:
            raise IngestionError(path, "manifest not found") from None
        except json.JSONDecodeError as exc:
            raise IngestionError(path, f"manifest is not valid JSON: {exc}") from None
        unknown = set(raw) - {"name", "real", "fake", "metadata"}
        if unknown:
            raise ConfigurationError(f"unknown manifest key: {sorted(unknown)[0]!r}")
        real = tuple(os.path.join(base, p) for p in raw.get("real", []))
        fake = tuple(
            (os.path.join(base, e["path"]), e["generator"]) for e in raw.get("fake", [])
        )
        return cls(
            name=raw.get("name", os.path.basename(path)),
            real=real,
            fake=fake,
            metadata=raw.get("metadata", {}),
        )


@dataclass
class EvalReport:
    dataset: str
    config_digest: str
    per_generator: dict
    mean_auroc: float
    score_histograms: dict
    corruption: dict | None = None
    seed: int = 0
    skipped: int = 0
    config: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "dataset": self.dataset,
            "config_digest": self.config_digest,
            "per_generator": dict(self.per_generator),
            "mean_auroc": self.mean_auroc,
            "score_histograms": self.score_histograms,
            "corruption": self.corruption,
            "seed": self.seed,
            "skipped": self.skipped,
            "config": self.config,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "EvalReport":
        return cls(**raw)

    def digest(self) -> str:
        return hashlib.sha256(canonical_json(self.to_dict()).encode()).hexdigest()

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)

    @classmethod
    def load(cls, path) -> "EvalReport":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def _midranks(values: np.ndarray) -> np.ndarray:
    """1-based average ranks (tied values share the midpoint rank)."""
    uniq, inverse, counts = np.unique(values, return_inverse=True, return_counts=True)
    ends = np.cumsum(counts)
    mids = ends - (counts - 1) / 2.0
    return mids[inverse]


def auroc(real_scores, fake_scores) -> float:
    """P(real score > fake score), ties at half credit (Mann-Whitney ranks)."""
    real = np.asarray(list(real_scores), dtype=np.float64)
    fake = np.asarray(list(fake_scores), dtype=np.float64)
    if real.size == 0 or fake.size == 0:
        raise ValidationError("auroc needs non-empty real and fake score lists")
    if not (np.isfinite(real).all() and np.isfinite(fake).all()):
        raise ValidationError("auroc scores must be finite")
    ranks = _midranks(np.concatenate([real, fake]))
    rank_sum = float(ranks[: real.size].sum())
    u = rank_sum - real.size * (real.size + 1) / 2.0
    return u / (real.size * fake.size)


def export_histogram(records, bins: int, labels=None) -> dict:
    """Equal-width bins over the pooled score range, with per-class counts.

    ``labels[i]`` is the class of ``records[i]``; without labels everything is
    one class. All-identical scores collapse to a single degenerate bin (with a
    warning).
    """
    records = list(records)
    if not records:
        raise ValidationError("cannot histogram an empty record list")
    if bins < 2:
        raise ValidationError(f"bins must be >= 2, got {bins}")
    digests = {r.config_digest for r in records}
    if len(digests) > 1:
        raise ValidationError(
            "records with mismatched config digests may not be aggregated "
            f"({len(digests)} distinct digests)"
        )
    scores = np.asarray([r.score for r in records], dtype=np.float64)
    if labels is None:
        labels = ["all"] * len(records)
    labels = list(labels)
    if len(labels) != len(records):
        raise ValidationError("labels must parallel records")
    lo, hi = float(scores.min()), float(scores.max())
    classes = sorted(set(labels), key=labels.index)
    if lo == hi:
        warnings.warn("all scores identical; histogram collapses to one bin")
        edges = [lo, hi]
        counts = {c: [sum(1 for l in labels if l == c)] for c in classes}
        return {"bin_edges": edges, "classes": counts}
    edges = np.linspace(lo, hi, bins + 1)
    counts = {}
    for c in classes:
        class_scores = scores[[i for i, l in enumerate(labels) if l == c]]
        hist, _ = np.histogram(class_scores, bins=edges)
        counts[c] = hist.tolist()
    return {"bin_edges": edges.tolist(), "classes": counts}


def write_histogram_csv(hist: dict, path) -> None:
    edges = hist["bin_edges"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["bin_lo", "bin_hi", "class", "count"])
        for cls, counts in hist["classes"].items():
            for i, count in enumerate(counts):
                writer.writerow([repr(edges[i]), repr(edges[min(i + 1, len(edges) - 1)]), cls, count])


def _noise_seed(run_seed: int, corruption_seed: int, image_id: str) -> int:
    digest = hashlib.sha256(f"{run_seed}|{corruption_seed}|{image_id}".encode()).digest()
    return int.from_bytes(digest[:4], "big") & 0x7FFFFFFF


def _image_id(manifest_path_root: str, path: str) -> str:
    return os.path.relpath(path, manifest_path_root) if manifest_path_root else path


def _score_manifest(
    manifest: DatasetManifest,
    cfg: DetectorConfig,
    corruption: CorruptionSpec | None,
    seed: int,
    embedder: Embedder,
    jobs: int = 1,
):
    """Score every manifest image; returns (labeled records, skipped ids)."""
    items = [(p, REAL_LABEL) for p in manifest.real] + list(manifest.fake)
    root = os.path.commonpath([os.path.dirname(p) or "." for p, _ in items]) if items else ""

    def worker(item):
        path, label = item
        image_id = _image_id(root, path)
        try:
            image = load_image(path)
        except IngestionError as exc:
            return (label, image_id, None, str(exc))
        if corruption is not None:
            spec = corruption
            if spec.kind == "gaussian_noise":
                spec = CorruptionSpec(
                    kind=spec.kind,
                    parameter=spec.parameter,
                    seed=_noise_seed(seed, spec.seed, image_id),
                )
            image = corrupt(image, spec)
        record = warpad_score(image, cfg, embedder, image_id=image_id)
        return (label, image_id, record, None)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(worker, items))
    else:
        results = [worker(item) for item in items]

    labeled, skipped = [], []
    for label, image_id, record, error in results:
        if record is None:
            skipped.append((image_id, error))
        else:
            labeled.append((label, record))
    if len(skipped) > 0.1 * len(items):
        detail = "; ".join(f"{i}: {e}" for i, e in skipped[:5])
        raise IngestionError(
            manifest.name,
            f"{len(skipped)}/{len(items)} images unreadable (>10%): {detail}",
        )
    return labeled, skipped


def _assemble_report(
    manifest: DatasetManifest,
    cfg: DetectorConfig,
    labeled,
    skipped,
    corruption: CorruptionSpec | None,
    seed: int,
    bins: int = 20,
) -> EvalReport:
    real_scores = [r.score for label, r in labeled if label == REAL_LABEL]
    if not real_scores:
        raise ValidationError("no real images survived ingestion")
    per_generator = {}
    for gen in manifest.generators:
        fake_scores = [r.score for label, r in labeled if label == gen]
        if not fake_scores:
            raise ValidationError(f"generator {gen!r} has no scored images")
        per_generator[gen] = auroc(real_scores, fake_scores)
    mean_auroc = float(np.mean(list(per_generator.values())))
    hist = export_histogram(
        [r for _, r in labeled], bins=bins, labels=[label for label, _ in labeled]
    )
    return EvalReport(
        dataset=manifest.name,
        config_digest=cfg.digest(),
        per_generator=per_generator,
        mean_auroc=mean_auroc,
        score_histograms=hist,
        corruption=corruption.to_dict() if corruption else None,
        seed=seed,
        skipped=len(skipped),
        config=cfg.to_dict(),
    )


def run_eval(
    manifest: DatasetManifest,
    cfg: DetectorConfig,
    corruption: CorruptionSpec | None = None,
    *,
    seed: int = 0,
    embedder: Embedder | None = None,
    jobs: int = 1,
    output_dir=None,
    bins: int = 20,
) -> EvalReport:
    """Score the whole manifest and compute per-generator AUROC against the
    shared real scores; optionally persist records and the report."""
    embedder = embedder or make_embedder(cfg.embedder)
    labeled, skipped = _score_manifest(manifest, cfg, corruption, seed, embedder, jobs)
    report = _assemble_report(manifest, cfg, labeled, skipped, corruption, seed, bins)
    if output_dir is not None:
        os.makedirs(output_dir, exist_ok=True)
        write_score_records([r for _, r in labeled], os.path.join(output_dir, "records.jsonl"))
        report.save(os.path.join(output_dir, "report.json"))
    return report


@dataclass
class SweepEntry:
    value: object
    report: EvalReport | None = None
    error: str | None = None


def _wavelet_with(spec: WaveletSpec, **changes) -> WaveletSpec:
    fields = {"family": spec.family, "levels": spec.levels, "boundary": spec.boundary}
    fields.update(changes)
    return WaveletSpec(**fields)


def _config_for(base: DetectorConfig, axis: str, value):
    if axis == "alpha":
        return variant(base, alpha=float(value)), None
    if axis == "d_rescale":
        return variant(base, d_rescale=int(value)), None
    if axis == "d_patch":
        return variant(base, d_patch=int(value)), None
    if axis == "wavelet":
        return variant(base, wavelet=_wavelet_with(base.wavelet, family=str(value))), None
    if axis == "level":
        return variant(base, wavelet=_wavelet_with(base.wavelet, levels=int(value))), None
    if axis == "aggregation":
        return variant(base, aggregation=str(value)), None
    if axis == "corruption":
        return base, parse_corruption(str(value))
    raise ConfigurationError(f"unknown sweep axis {axis!r}; supported: {', '.join(SWEEP_AXES)}")


def parse_corruption(text: str) -> CorruptionSpec:
    """Parse 'kind=param[,seed=S]' (e.g. jpeg=90, gaussian_noise=0.05,seed=7)."""
    head, _, tail = text.partition(",")
    kind, sep, param = head.partition("=")
    if not sep:
        raise ConfigurationError(f"corruption must look like kind=param, got {text!r}")
    seed = 0
    if tail:
        key, sep2, sval = tail.partition("=")
        if key.strip() != "seed" or not sep2:
            raise ConfigurationError(f"unrecognized corruption option {tail!r}")
        seed = int(sval)
    try:
        value = float(param)
    except ValueError:
        raise ConfigurationError(f"corruption parameter must be numeric, got {param!r}") from None
    return CorruptionSpec(kind=kind.strip(), parameter=value, seed=seed)


def sweep(
    manifest: DatasetManifest,
    base_cfg: DetectorConfig,
    axis: str,
    values,
    *,
    seed: int = 0,
    embedder: Embedder | None = None,
    jobs: int = 1,
    output_dir=None,
    bins: int = 20,
) -> list:
    """One EvalReport per axis value, all other config fields held fixed.

    The aggregation axis reuses a single scoring pass: per-patch scores are
    computed once and re-folded per rule, so only one embedding pass runs.
    Invalid values are reported per entry and the sweep continues.
    """
    if axis not in SWEEP_AXES:
        raise ConfigurationError(f"unknown sweep axis {axis!r}; supported: {', '.join(SWEEP_AXES)}")
    embedder = embedder or make_embedder(base_cfg.embedder)
    entries = []

    if axis == "aggregation":
        labeled, skipped = _score_manifest(manifest, base_cfg, None, seed, embedder, jobs)
        for value in values:
            try:
                cfg = variant(base_cfg, aggregation=str(value))
                refolded = [
                    (label, ScoreRecord.build(r.image_id, r.patch_scores, cfg))
                    for label, r in labeled
                ]
                report = _assemble_report(manifest, cfg, refolded, skipped, None, seed, bins)
                entries.append(SweepEntry(value=value, report=report))
            except (ConfigurationError, ValidationError) as exc:
                entries.append(SweepEntry(value=value, error=str(exc)))
    else:
        for value in values:
            try:
                cfg, corruption = _config_for(base_cfg, axis, value)
                entry_embedder = (
                    embedder if cfg.embedder == base_cfg.embedder else make_embedder(cfg.embedder)
                )
                report = run_eval(
                    manifest, cfg, corruption,
                    seed=seed, embedder=entry_embedder, jobs=jobs, bins=bins,
                )
                entries.append(SweepEntry(value=value, report=report))
            except (ConfigurationError, ValidationError) as exc:
                entries.append(SweepEntry(value=value, error=str(exc)))

    if output_dir is not None:
        os.makedirs(output_dir, exist_ok=True)
        write_sweep_csv(entries, os.path.join(output_dir, f"sweep_{axis}.csv"))
        for i, entry in enumerate(entries):
            if entry.report is not None:
                entry.report.save(os.path.join(output_dir, f"report_{axis}_{i}.json"))
    return entries


def write_sweep_csv(entries, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["axis", "generator", "auroc"])
        for entry in entries:
            if entry.report is None:
                writer.writerow([entry.value, "__error__", entry.error])
                continue
            for gen, value in entry.report.per_generator.items():
                writer.writerow([entry.value, gen, repr(value)])
