"""sRGB <-> CIELCH conversion and chroma-clipping gamut mapping (D65, 2 deg)."""

from __future__ import annotations

import math

_SRGB_TO_XYZ = (
    (0.4124564, 0.3575761, 0.1804375),
    (0.2126729, 0.7151522, 0.0721750),
    (0.0193339, 0.1191920, 0.9503041),
)
_XYZ_TO_SRGB = (
    (3.2404542, -1.5371385, -0.4985314),
    (-0.9692660, 1.8760108, 0.0415560),
    (0.0556434, -0.2040259, 1.0572252),
)
_WHITE = (0.95047, 1.0, 1.08883)
_DELTA = 6.0 / 29.0
_GAMUT_EPS = 1e-9


def _to_linear(c: float) -> float:
    return ((c + 0.055) / 1.055) ** 2.4 if c > 0.04045 else c / 12.92


def _from_linear(c: float) -> float:
    return 1.055 * c ** (1.0 / 2.4) - 0.055 if c > 0.0031308 else 12.92 * c


def _f(t: float) -> float:
    return t ** (1.0 / 3.0) if t > _DELTA**3 else t / (3.0 * _DELTA**2) + 4.0 / 29.0


def _f_inv(t: float) -> float:
    return t**3 if t > _DELTA else 3.0 * _DELTA**2 * (t - 4.0 / 29.0)


def srgb8_to_lch(rgb: tuple[int, int, int]) -> tuple[float, float, float]:
    lin = [_to_linear(c / 255.0) for c in rgb]
    x, y, z = (sum(row[i] * lin[i] for i in range(3)) for row in _SRGB_TO_XYZ)
    fx, fy, fz = _f(x / _WHITE[0]), _f(y / _WHITE[1]), _f(z / _WHITE[2])
    l = 116.0 * fy - 16.0
    a = 500.0 * (fx - fy)
    b = 200.0 * (fy - fz)
    return (l, math.hypot(a, b), math.degrees(math.atan2(b, a)) % 360.0)


def _lch_to_linear(l: float, c: float, h: float) -> tuple[float, float, float]:
    hr = math.radians(h)
    a = c * math.cos(hr)
    b = c * math.sin(hr)
    fy = (l + 16.0) / 116.0
    fx = fy + a / 500.0
    fz = fy - b / 200.0
    x = _WHITE[0] * _f_inv(fx)
    y = _WHITE[1] * _f_inv(fy)
    z = _WHITE[2] * _f_inv(fz)
    return tuple(sum(row[i] * (x, y, z)[i] for i in range(3)) for row in _XYZ_TO_SRGB)


def _in_gamut(lin: tuple[float, float, float]) -> bool:
    return all(-_GAMUT_EPS <= c <= 1.0 + _GAMUT_EPS for c in lin)


def lch_to_srgb8(l: float, c: float, h: float) -> tuple[int, int, int]:
    """Convert to 8-bit sRGB, shrinking chroma toward neutral when out of gamut."""
    lin = _lch_to_linear(l, c, h)
    if not _in_gamut(lin):
        lo, hi = 0.0, c
        for _ in range(40):
            mid = 0.5 * (lo + hi)
            if _in_gamut(_lch_to_linear(l, mid, h)):
                lo = mid
            else:
                hi = mid
        lin = _lch_to_linear(l, lo, h)
    out = []
    for v in lin:
        v = min(max(v, 0.0), 1.0)
        out.append(int(round(_from_linear(v) * 255.0)))
    return tuple(out)


def hue_lerp(h1: float, h2: float, t: float) -> float:
    """Interpolate hue along the shorter arc of the color wheel."""
    d = ((h2 - h1 + 180.0) % 360.0) - 180.0
    return (h1 + t * d) % 360.0


def hex_to_rgb8(s: str) -> tuple[int, int, int]:
    s = s.lstrip("#")
    return (int(s[0:2], 16), int(s[2:4], 16), int(s[4:6], 16))


def rgb8_to_hex(rgb: tuple[int, int, int]) -> str:
    return "#{:02x}{:02x}{:02x}".format(*rgb)
