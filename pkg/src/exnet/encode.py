"""Visual encoding (diverging color scale, node sizing) and bundle export."""

from __future__ import annotations

import zlib
from dataclasses import dataclass
from typing import Mapping

from .bmlr.fit import FitResult
from .colorspace import hex_to_rgb8, hue_lerp, lch_to_srgb8, rgb8_to_hex, srgb8_to_lch
from .corpus import SubjectAreaDataset
from .io import SCHEMA_VERSION, write_json

RED_HEX = "#d73030"    # subject minimum
GREY_HEX = "#999999"   # subject average
BLUE_HEX = "#3068d7"   # subject maximum
NEUTRAL_CHROMA = 0.1   # below this, an anchor contributes no hue of its own

RADIUS_MIN = 3.0
RADIUS_MAX = 30.0

COUNTRY_WHEEL_SIZE = 20
COUNTRY_WHEEL = [
    rgb8_to_hex(lch_to_srgb8(62.0, 52.0, k * 360.0 / COUNTRY_WHEEL_SIZE))
    for k in range(COUNTRY_WHEEL_SIZE)
]


@dataclass(frozen=True)
class ColorScale:
    """Red -> grey -> blue diverging scale anchored at (min, avg, max) rates."""

    min_rate: float
    avg_rate: float
    max_rate: float
    red: tuple[float, float, float] = srgb8_to_lch(hex_to_rgb8(RED_HEX))
    grey: tuple[float, float, float] = srgb8_to_lch(hex_to_rgb8(GREY_HEX))
    blue: tuple[float, float, float] = srgb8_to_lch(hex_to_rgb8(BLUE_HEX))

    def __post_init__(self) -> None:
        if not self.min_rate <= self.avg_rate <= self.max_rate:
            raise ValueError("scale domain must satisfy min <= avg <= max")

    @classmethod
    def from_fit(cls, fit: FitResult) -> "ColorScale":
        means = [s.mean for s in fit.ref_rates.values()]
        lo, hi = min(means), max(means)
        avg = min(max(fit.overall_rate, lo), hi)
        return cls(min_rate=lo, avg_rate=avg, max_rate=hi)


def _lerp_lch(c1, c2, t: float) -> tuple[float, float, float]:
    l = c1[0] + t * (c2[0] - c1[0])
    c = c1[1] + t * (c2[1] - c1[1])
    h1, h2 = c1[2], c2[2]
    # a near-neutral endpoint has no meaningful hue; hold the other end's
    if c1[1] < NEUTRAL_CHROMA:
        h1 = h2
    if c2[1] < NEUTRAL_CHROMA:
        h2 = h1
    return (l, c, hue_lerp(h1, h2, t))


def color_for(value: float, scale: ColorScale) -> tuple[int, int, int]:
    """Clamped piecewise-linear CIELCH interpolation, gamut-mapped to sRGB."""
    v = min(max(value, scale.min_rate), scale.max_rate)
    if v <= scale.avg_rate:
        span = scale.avg_rate - scale.min_rate
        t = (v - scale.min_rate) / span if span > 0 else 1.0
        l, c, h = _lerp_lch(scale.red, scale.grey, t)
    else:
        span = scale.max_rate - scale.avg_rate
        t = (v - scale.avg_rate) / span if span > 0 else 1.0
        l, c, h = _lerp_lch(scale.grey, scale.blue, t)
    return lch_to_srgb8(l, c, h)


def color_hex(value: float, scale: ColorScale) -> str:
    return rgb8_to_hex(color_for(value, scale))


def radius_for(value: float, max_value: float,
               r_min: float = RADIUS_MIN, r_max: float = RADIUS_MAX) -> float:
    """Area-proportional radius: r_min at zero, r_max at the subject maximum."""
    if value <= 0.0 or max_value <= 0.0:
        return r_min
    frac = min(value / max_value, 1.0)
    return r_min + (r_max - r_min) * frac**0.5


def country_color(code: str) -> str:
    """Stable categorical color from a 20-hue wheel (crc32, not salted hash)."""
    return COUNTRY_WHEEL[zlib.crc32(code.encode("utf-8")) % COUNTRY_WHEEL_SIZE]


def export_subject(
    data: SubjectAreaDataset,
    fit: FitResult,
    stats: Mapping[str, Mapping[str, float]],
    positions_network: Mapping[str, tuple[float, float]],
    positions_geo: Mapping[str, tuple[float, float]],
    scale: ColorScale | None = None,
) -> dict:
    """Assemble the self-contained visualization bundle for one subject area."""
    ids = sorted(data.institutions)
    offenders = []
    for name, mapping in (
        ("stats", stats),
        ("positions_network", positions_network),
        ("positions_geo", positions_geo),
    ):
        missing = [i for i in ids if i not in mapping]
        if missing:
            offenders.append(f"{name} missing {missing[:5]}")
    ref_ids = {i for i in ids if data.institutions[i].is_reference}
    missing_rates = sorted(ref_ids - set(fit.ref_rates))
    if missing_rates:
        offenders.append(f"fit.ref_rates missing {missing_rates[:5]}")
    if offenders:
        raise ValueError("cross-input institution mismatch: " + "; ".join(offenders))

    if scale is None:
        scale = ColorScale.from_fit(fit)

    max_betweenness = max((stats[i]["betweenness"] for i in ids), default=0.0)
    max_collab = max((stats[i]["collab_total"] for i in ids), default=0.0)

    institutions = []
    for iid in ids:
        inst = data.institutions[iid]
        st = stats[iid]
        rate = fit.ref_rates.get(iid)
        institutions.append(
            {
                "id": iid,
                "name": inst.name,
                "country": inst.country,
                "lat": inst.lat,
                "lon": inst.lon,
                "is_reference": inst.is_reference,
                "rate": rate.to_dict() if rate is not None else None,
                "betweenness": st["betweenness"],
                "degree": st["degree"],
                "collab_total": st["collab_total"],
                "radius_overview": radius_for(st["betweenness"], max_betweenness),
                "radius_selected": radius_for(st["collab_total"], max_collab),
                "color_rate": color_hex(rate.mean, scale) if rate is not None else None,
                "color_country": country_color(inst.country),
                "pos_net": list(positions_network[iid]),
                "pos_geo": list(positions_geo[iid]),
            }
        )

    edges = []
    for e in sorted(data.edges, key=lambda e: (e.ref_id, e.net_id)):
        rate = fit.edge_rates.get((e.ref_id, e.net_id))
        if rate is None:
            raise ValueError(f"cross-input institution mismatch: fit.edge_rates "
                             f"missing ({e.ref_id}, {e.net_id})")
        edges.append(
            {
                "ref": e.ref_id,
                "net": e.net_id,
                "n_papers": e.n_papers,
                "n_top": e.n_top,
                "rate": {"mean": rate.mean,
                         "goldstein": [rate.goldstein_lower, rate.goldstein_upper]},
                "color_rate": color_hex(rate.mean, scale),
            }
        )

    return {
        "schema_version": SCHEMA_VERSION,
        "subject": data.subject,
        "overall_rate": fit.overall_rate,
        "counts": {
            "institutions": len(ids),
            "references": len(ref_ids),
            "edges": len(edges),
        },
        "color_scale": {
            "domain": [scale.min_rate, scale.avg_rate, scale.max_rate],
            "anchors": [RED_HEX, GREY_HEX, BLUE_HEX],
        },
        "institutions": institutions,
        "edges": edges,
    }


def save_bundle(bundle: dict, path) -> None:
    write_json(bundle, path)
