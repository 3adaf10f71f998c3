"""Space-time plots and heat maps.

SVG and binary PPM output are written by hand so identical inputs give
identical bytes.  Matplotlib is only used for the PNG report figures.
"""

from __future__ import annotations

from typing import Sequence

from .line import ColoredLine, ContractError

PALETTE = [
    (0, 0, 0),
    (128, 128, 128),
    (255, 255, 255),
    (211, 211, 211),
    (31, 119, 180),
    (255, 127, 14),
    (44, 160, 44),
    (148, 103, 189),
    (140, 86, 75),
    (227, 119, 194),
]
CUT_RGB = (255, 0, 0)
MARK_RGB = (0, 170, 0)


def _hex(rgb) -> str:
    return "#%02x%02x%02x" % tuple(rgb)


def _num(x: float) -> str:
    return ("%.4f" % x).rstrip("0").rstrip(".") or "0"


def color_of(c: int, palette=None):
    palette = palette or PALETTE
    if c >= len(palette):
        raise ContractError("no palette entry for color %d" % c)
    return palette[c]


def space_time_rows(lines: Sequence[ColoredLine], cut_sets: Sequence = ()) -> list:
    """Pair each line with the cuts applied to it (None for the last row)."""
    cut_sets = list(cut_sets)
    return [(line, cut_sets[i] if i < len(cut_sets) else None) for i, line in enumerate(lines)]


def render_space_time_svg(rows, width: int = 600, row_height: int = 10, gap: int = 2, palette=None) -> bytes:
    if not rows:
        raise ContractError("nothing to render")
    pitch = row_height + gap
    height = pitch * len(rows) + gap
    out = [
        '<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" viewBox="0 0 %d %d">' % (width, height, width, height),
        '<rect width="%d" height="%d" fill="#ffffff"/>' % (width, height),
    ]
    for n, (line, cuts) in enumerate(rows):
        y = gap + n * pitch
        out.append('<g class="row" data-n="%d">' % n)
        pos = 0.0
        for color, length in line.segments:
            x0 = float(pos) * width
            pos += float(length)
            out.append(
                '<rect x="%s" y="%d" width="%s" height="%d" fill="%s"/>'
                % (_num(x0), y, _num(float(length) * width), row_height, _hex(color_of(color, palette)))
            )
        out.append('<rect class="frame" x="0" y="%d" width="%d" height="%d" fill="none" stroke="#000000" stroke-width="0.5"/>' % (y, width, row_height))
        for c in cuts or ():
            x = _num(float(c) * width)
            out.append('<line class="cut" x1="%s" y1="%d" x2="%s" y2="%d" stroke="%s" stroke-width="1"/>' % (x, y, x, y + row_height, _hex(CUT_RGB)))
        out.append("</g>")
    out.append("</svg>")
    return ("\n".join(out) + "\n").encode("utf-8")


def _ppm(pixels, width: int, height: int) -> bytes:
    return b"P6\n%d %d\n255\n" % (width, height) + bytes(pixels)


def render_space_time_ppm(rows, width: int = 600, row_height: int = 10, gap: int = 2, palette=None) -> bytes:
    if not rows:
        raise ContractError("nothing to render")
    pitch = row_height + gap
    height = pitch * len(rows) + gap
    pixels = bytearray([255] * (width * height * 3))

    def put(x, y, rgb):
        i = 3 * (y * width + x)
        pixels[i : i + 3] = bytes(rgb)

    for n, (line, cuts) in enumerate(rows):
        y0 = gap + n * pitch
        bounds = []
        pos = 0.0
        for color, length in line.segments:
            bounds.append((pos, pos + float(length), color_of(color, palette)))
            pos += float(length)
        seg = 0
        for x in range(width):
            centre = (x + 0.5) / width
            while seg < len(bounds) - 1 and centre >= bounds[seg][1]:
                seg += 1
            for y in range(y0, y0 + row_height):
                put(x, y, bounds[seg][2])
        for c in cuts or ():
            x = min(width - 1, int(float(c) * width))
            for y in range(y0, y0 + row_height):
                put(x, y, CUT_RGB)
    return _ppm(pixels, width, height)


def _shade(value: float, lo: float, hi: float):
    t = 0.0 if hi <= lo else (value - lo) / (hi - lo)
    g = int(round(40 + 215 * t))
    return (g, g, g)


def _field_2d(field):
    if not field or len(field[0][0]) != 2:
        raise ContractError("a heat map needs a field over exactly two cut coordinates")
    return field


def _axis(field) -> list:
    return sorted({c for p, _ in field for c in p})


def render_heatmap_svg(field, argmin=None, size: int = 400) -> bytes:
    """Phi over (c_1, c_2); darker is lower.  A green x marks ``argmin``."""
    field = _field_2d(field)
    xs = _axis(field)
    step = (xs[1] - xs[0]) if len(xs) > 1 else 1.0
    values = [v for _, v in field]
    lo, hi = min(values), max(values)
    cell = step * size
    out = [
        '<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" viewBox="0 0 %d %d">' % (size, size, size, size),
        '<rect width="%d" height="%d" fill="#ffffff"/>' % (size, size),
    ]
    for (c1, c2), v in field:
        x = (c1 - step / 2) * size
        y = (1 - c2 - step / 2) * size
        out.append('<rect x="%s" y="%s" width="%s" height="%s" fill="%s"/>' % (_num(x), _num(y), _num(cell), _num(cell), _hex(_shade(v, lo, hi))))
    if argmin is not None:
        x, y = float(argmin[0]) * size, (1 - float(argmin[1])) * size
        r = max(3.0, 2 * cell)
        stroke = 'stroke="%s" stroke-width="2"' % _hex(MARK_RGB)
        out.append('<line class="argmin" x1="%s" y1="%s" x2="%s" y2="%s" %s/>' % (_num(x - r), _num(y - r), _num(x + r), _num(y + r), stroke))
        out.append('<line class="argmin" x1="%s" y1="%s" x2="%s" y2="%s" %s/>' % (_num(x - r), _num(y + r), _num(x + r), _num(y - r), stroke))
    out.append("</svg>")
    return ("\n".join(out) + "\n").encode("utf-8")


def render_heatmap_ppm(field, argmin=None) -> bytes:
    field = _field_2d(field)
    xs = _axis(field)
    index = {x: i for i, x in enumerate(xs)}
    n = len(xs)
    values = [v for _, v in field]
    lo, hi = min(values), max(values)
    pixels = bytearray([255] * (n * n * 3))
    for (c1, c2), v in field:
        i = index[c1]
        j = n - 1 - index[c2]
        pixels[3 * (j * n + i) : 3 * (j * n + i) + 3] = bytes(_shade(v, lo, hi))
    if argmin is not None and float(argmin[0]) in index and float(argmin[1]) in index:
        i, j = index[float(argmin[0])], n - 1 - index[float(argmin[1])]
        pixels[3 * (j * n + i) : 3 * (j * n + i) + 3] = bytes(MARK_RGB)
    return _ppm(pixels, n, n)


# --- matplotlib report figures ---------------------------------------------


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def plot_phi_series(series: dict, path, log_scale: bool = True, title: str | None = None) -> None:
    """Phi against N, one curve per label."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, values in series.items():
        style = "--" if "adhoc" in str(label) else "-"
        ax.plot(range(len(values)), values, style, label=str(label), lw=1.2)
    if log_scale:
        ax.set_yscale("log")
    ax.set_xlabel("N")
    ax.set_ylabel(r"$\Phi$")
    if title:
        ax.set_title(title)
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)


def plot_heatmap(field, path, argmin=None, title: str | None = None) -> None:
    import numpy as np

    field = _field_2d(field)
    plt = _pyplot()
    xs = _axis(field)
    index = {x: i for i, x in enumerate(xs)}
    grid = np.full((len(xs), len(xs)), np.nan)
    for (c1, c2), v in field:
        grid[index[c2], index[c1]] = v
    fig, ax = plt.subplots(figsize=(5, 4.5))
    step = xs[1] - xs[0] if len(xs) > 1 else 1.0
    extent = (xs[0] - step / 2, xs[-1] + step / 2, xs[0] - step / 2, xs[-1] + step / 2)
    im = ax.imshow(grid, origin="lower", extent=extent, cmap="Greys_r", interpolation="nearest")
    if argmin is not None:
        ax.plot([float(argmin[0])], [float(argmin[1])], "x", color="#00aa00", ms=9, mew=2)
    ax.set_xlabel(r"$c_1$")
    ax.set_ylabel(r"$c_2$")
    if title:
        ax.set_title(title)
    fig.colorbar(im, ax=ax, label=r"$\Phi$")
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
