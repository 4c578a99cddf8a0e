"""Van der Grinten world projection and geographic node placement.

Closed-form spherical forward equations; the whole world maps inside the
circle of radius pi*R, the equator to the straight true-scale line y = 0,
and the central meridian to x = 0.
"""

from __future__ import annotations

import math
from typing import Mapping

import numpy as np

from ..corpus import Institution

MAP_RADIUS_UNITS = 500.0  # layout units of the projected world circle
DEGENERACY_TOL = 1e-10    # radians; below this the equator/meridian limits apply


def vdg_project(lat: float, lon: float, radius: float = 1.0) -> tuple[float, float]:
    """Project geographic degrees to map coordinates.

    The closed forms are evaluated in rationalized shape (numerators turned
    into sums of nonnegative terms), which is algebraically identical to the
    textbook expressions but avoids the catastrophic cancellation those
    exhibit for small latitudes or longitudes.
    """
    if not -90.0 <= lat <= 90.0:
        raise ValueError(f"lat out of range [-90, 90]: {lat}")
    if not -180.0 < lon <= 180.0:
        raise ValueError(f"lon out of range (-180, 180]: {lon}")
    phi = math.radians(lat)
    lam = math.radians(lon)
    if abs(phi) < DEGENERACY_TOL:
        return (radius * lam, 0.0)
    theta = math.asin(min(1.0, abs(2.0 * phi / math.pi)))
    if abs(lam) < DEGENERACY_TOL or abs(phi) == math.pi / 2.0:
        y = math.pi * radius * math.tan(theta / 2.0)
        return (0.0, math.copysign(y, phi))
    a = 0.5 * abs(math.pi / lam - lam / math.pi)
    sin_t = math.sin(theta)
    cos_t = math.cos(theta)
    one_minus_s = cos_t * cos_t / (1.0 + sin_t)          # 1 - sin, stable
    denom = sin_t - 2.0 * math.sin(theta / 2.0) ** 2     # sin + cos - 1, stable
    g = cos_t / denom
    p = g * (2.0 / sin_t - 1.0)
    q = a * a + g

    g_minus_1 = one_minus_s / denom
    p_minus_g = 2.0 * g * one_minus_s / sin_t
    p2_minus_g2 = p_minus_g * (p + g)
    p_minus_1 = p_minus_g + g_minus_1
    # p^2 - 2g + 1 as a sum of nonnegative terms
    p2_m2g_p1 = p_minus_1 * p_minus_1 + 2.0 * p_minus_g

    # x = piR (p^2-g^2) / (a(p^2-g) + sqrt(a^2 (p^2-g)^2 + (p^2+a^2)(p^2-g^2)))
    p2_minus_g = p * p - g
    x_rad = a * a * p2_minus_g * p2_minus_g + (p * p + a * a) * p2_minus_g2
    x = math.pi * radius * p2_minus_g2 / (a * p2_minus_g + math.sqrt(max(0.0, x_rad)))

    # y = piR (a^2 (2g-1) + g^2) / (pq + a sqrt(a^2 (p^2-2g+1) + (p^2-g^2)))
    s_arg = a * a * p2_m2g_p1 + p2_minus_g2
    y = (
        math.pi
        * radius
        * (a * a * (2.0 * g - 1.0) + g * g)
        / (p * q + a * math.sqrt(max(0.0, s_arg)))
    )
    return (math.copysign(x, lam), math.copysign(y, phi))


def map_positions(
    institutions: Mapping[str, Institution],
    seed: int = 0,
    radius_units: float = MAP_RADIUS_UNITS,
) -> dict[str, tuple[float, float]]:
    """Projected positions for every institution, scaled to the layout map circle.

    Institutions without coordinates land on their country's centroid (over
    catalog-mates with known coordinates) plus a small seeded jitter; with no
    located countrymates they jitter around the origin.
    """
    scale = radius_units / math.pi
    by_country: dict[str, list[tuple[float, float]]] = {}
    for inst in institutions.values():
        if inst.lat is not None and inst.lon is not None:
            by_country.setdefault(inst.country, []).append((inst.lat, inst.lon))

    rng = np.random.default_rng([seed, 0x6E0])
    out: dict[str, tuple[float, float]] = {}
    for iid in sorted(institutions):
        inst = institutions[iid]
        if inst.lat is not None and inst.lon is not None:
            x, y = vdg_project(inst.lat, inst.lon)
            out[iid] = (x * scale, y * scale)
            continue
        mates = by_country.get(inst.country)
        if mates:
            lat = sum(m[0] for m in mates) / len(mates)
            lon = sum(m[1] for m in mates) / len(mates)
            lon = min(max(lon, math.nextafter(-180.0, 0.0)), 180.0)
            x, y = vdg_project(lat, lon)
            cx, cy = x * scale, y * scale
        else:
            cx, cy = 0.0, 0.0
        jx, jy = rng.normal(0.0, 0.005 * radius_units, size=2)
        out[iid] = (cx + jx, cy + jy)
    return out
