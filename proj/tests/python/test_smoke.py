"""Smoke tests for the Python module: each main operation runs and agrees
with a few pinned physics facts."""

import math
import os
import sys
import tempfile

import caustica as ca


def approx(a, b, tol=1e-9):
    assert abs(a - b) <= tol, f"{a} != {b} (tol {tol})"


def test_reflect_involution():
    d = ca.Vec3(0.3, -0.5, 0.81)
    n = ca.Vec3(0.0, 0.0, 1.0)
    d = ca.reflect(ca.reflect(d, n), n)
    approx(d.x, 0.3)
    approx(d.z, 0.81)


def test_refract_window():
    n = ca.Vec3(0, 0, 1)
    down_at = lambda deg: ca.Vec3(math.sin(math.radians(deg)), 0, -math.cos(math.radians(deg)))
    assert ca.refract(down_at(48.0), n, 1.333, 1.0) is not None
    assert ca.refract(down_at(49.0), n, 1.333, 1.0) is None
    approx(math.degrees(ca.snells_window_limit(1.333)), 48.6066, 1e-3)


def test_flat_v_image():
    scene = ca.default_scene()
    p = ca.Vec3(scene.radius, 0.0, 0.08)
    t = ca.trace_to_table(scene, p)
    assert t is not None
    approx(t.x, 0.0875, 1e-12)
    pair = ca.image_pair(scene, p, t)
    assert pair is not None
    assert pair.v_point.z == 0.0
    # interior image sits inside the tube
    assert math.hypot(pair.h_point.x, pair.h_point.y) < scene.radius


def test_solve_round_trip():
    scene = ca.default_scene()
    p = ca.solve_reflection_point(scene, ca.Vec3(0.0875, 0.0, 0.0))
    assert p is not None
    approx(p.z, 0.08, 1e-9)


def test_rainbow():
    b, dev = ca.rainbow_minimum(1.333)
    approx(b, 0.8608, 5e-4)
    approx(180.0 - math.degrees(dev), 42.078, 1e-2)


def test_pool_slopes():
    ws = ca.WaterScene()
    ws.eye = ca.Vec3(0, 0, 10 * 0.3048)
    ws.floor_depth = 10 * 0.3048
    h, v, back = ca.pool_local_slopes(ws, math.radians(35))
    approx(math.degrees(back), 9.83, 0.05)
    approx(math.degrees(h), 17.96, 0.05)
    approx(math.degrees(v), 7.95, 0.05)


def test_archer():
    ws = ca.WaterScene()
    ws.eye = ca.Vec3(0, 0, -0.3)
    sol = ca.archer_aim(ws, ca.Vec3(0, 0, 1.0))
    assert sol.correction < 1e-12
    out = ca.archer_emergent_direction(ws, ca.Vec3(math.sin(math.radians(49)), 0,
                                                   math.cos(math.radians(49))))
    assert out is None


def test_anamorph_map_and_render():
    scene = ca.default_scene()
    amap = ca.AnamorphMap.build(ca.AnamorphKind.THREE_D, scene, 0.05, 0.06)
    t = amap.forward(0.0, 0.03)
    assert t is not None
    uv = amap.inverse(t)
    assert uv is not None
    approx(uv[0], 0.0, 1e-7)
    approx(uv[1], 0.03, 1e-7)

    # oversize request raises
    try:
        ca.AnamorphMap.build(ca.AnamorphKind.ERECT, scene, 0.2, 0.05)
        raise AssertionError("expected ValueError")
    except ValueError:
        pass

    # tiny render end-to-end
    try:
        from PIL import Image
        with tempfile.TemporaryDirectory() as tmp:
            src = os.path.join(tmp, "src.png")
            out = os.path.join(tmp, "sheet.png")
            Image.new("RGB", (32, 32), (40, 90, 160)).save(src)
            stats = ca.render_sheet(amap, src, out, dpi=60)
            assert stats["mapped_pixels"] > 100
            sheet = Image.open(out)
            assert sheet.size[0] > 10 and sheet.size[1] > 10
    except ImportError:
        pass


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for t in tests:
        t()
        print(f"ok {t.__name__}")
    print(f"{len(tests)} python smoke tests passed")


if __name__ == "__main__":
    sys.exit(main())
