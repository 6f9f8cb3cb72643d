#!/usr/bin/env python3
"""Regenerates the binary STL fixtures and their goal annotations.

Each fixture is a closed lumen surface extracted from a signed-distance
volume with marching cubes. Coordinates are millimetres. Goal files list
the face indices whose centroids fall inside a labelled target ball; face
indices refer to the mesh AFTER welding (tolerance 1e-6), which preserves
marching-cubes face order, so they can be computed here directly.

Run from the repo root:  python3 assets/fixtures/generate_fixtures.py
"""

import json
import struct
from pathlib import Path

import numpy as np
from skimage.measure import marching_cubes

HERE = Path(__file__).resolve().parent


def capsule_dist(points, a, b, radius):
    """Signed distance from `points` to a capsule around segment a-b."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ab = b - a
    denom = float(ab @ ab)
    t = ((points - a) @ ab) / denom if denom > 0 else np.zeros(len(points))
    t = np.clip(t, 0.0, 1.0)
    closest = a + t[:, None] * ab
    return np.linalg.norm(points - closest, axis=1) - radius


def arc_dist(points, center, radius_arc, tube_radius, ang0, ang1):
    """Distance to a torus segment in the x-z plane (arc of circle)."""
    center = np.asarray(center, dtype=float)
    rel = points - center
    ang = np.arctan2(rel[:, 2], rel[:, 0])
    ang = np.clip(ang, ang0, ang1)
    ring = center + radius_arc * np.stack(
        [np.cos(ang), np.zeros_like(ang), np.sin(ang)], axis=1
    )
    return np.linalg.norm(points - ring, axis=1) - tube_radius


def extract(sdf, lo, hi, spacing):
    """Runs marching cubes on `sdf` sampled over box [lo, hi]."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    shape = np.maximum(np.round((hi - lo) / spacing).astype(int) + 1, 2)
    axes = [np.linspace(lo[k], hi[k], shape[k]) for k in range(3)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
    flat = grid.reshape(-1, 3)
    values = sdf(flat).reshape(shape)
    step = [(hi[k] - lo[k]) / (shape[k] - 1) for k in range(3)]
    verts, faces, _, _ = marching_cubes(values, level=0.0, spacing=step)
    verts = verts + lo
    return verts.astype(np.float64), faces.astype(np.int64)


def write_stl_binary(path, verts, faces):
    tri = verts[faces]  # (F, 3, 3)
    e1 = tri[:, 1] - tri[:, 0]
    e2 = tri[:, 2] - tri[:, 0]
    normals = np.cross(e1, e2)
    lengths = np.linalg.norm(normals, axis=1, keepdims=True)
    normals = np.where(lengths > 0, normals / np.maximum(lengths, 1e-30), 0.0)
    with open(path, "wb") as fh:
        fh.write(b"fixture".ljust(80, b"\0"))
        fh.write(struct.pack("<I", len(faces)))
        for n, t in zip(normals.astype(np.float32), tri.astype(np.float32)):
            fh.write(n.tobytes())
            fh.write(t.tobytes())
            fh.write(b"\0\0")
    print(f"  {path.name}: {len(faces)} faces, {len(verts)} vertices")


def faces_near(verts, faces, center, radius):
    """Face ids whose centroid lies within `radius` of `center`."""
    centroids = verts[faces].mean(axis=1)
    d = np.linalg.norm(centroids - np.asarray(center, dtype=float), axis=1)
    return sorted(int(i) for i in np.nonzero(d <= radius)[0])


def cap_faces(verts, faces, segment_end, direction, branch_radius):
    """Face ids on the polar region of a capsule end cap.

    The capsule ends in a hemisphere of `branch_radius` centred at
    `segment_end`; its pole lies one radius further along `direction`.
    """
    direction = np.asarray(direction, dtype=float)
    direction = direction / np.linalg.norm(direction)
    pole = np.asarray(segment_end, dtype=float) + branch_radius * direction
    return faces_near(verts, faces, pole, 0.8 * branch_radius)


def straight_tube():
    """Closed cylinder along +z: entry cap near z=0, goal cap near z=40."""
    def sdf(p):
        return capsule_dist(p, [0, 0, 2], [0, 0, 38], 2.0)

    verts, faces = extract(sdf, [-4, -4, -2], [4, 4, 44], 0.5)
    write_stl_binary(HERE / "tube.stl", verts, faces)
    goal = cap_faces(verts, faces, [0, 0, 38], [0, 0, 1], 2.0)
    (HERE / "tube_goal.json").write_text(
        json.dumps({"distal_cap": goal}, indent=2) + "\n"
    )
    return ("tube.stl", len(faces), ["tube_goal.json"])


def bifurcation():
    """Y-shape: trunk along +z splits into two branches at 45 degrees."""
    split = np.array([0.0, 0.0, 20.0])
    d_left = np.array([-np.sin(np.pi / 4), 0.0, np.cos(np.pi / 4)])
    d_right = np.array([np.sin(np.pi / 4), 0.0, np.cos(np.pi / 4)])
    tip_left = split + 18.0 * d_left
    tip_right = split + 18.0 * d_right

    def sdf(p):
        trunk = capsule_dist(p, [0, 0, 2], split, 2.5)
        left = capsule_dist(p, split, tip_left, 1.8)
        right = capsule_dist(p, split, tip_right, 1.8)
        return np.minimum(trunk, np.minimum(left, right))

    verts, faces = extract(sdf, [-18, -5, -2], [18, 5, 36], 0.45)
    write_stl_binary(HERE / "bifurcation.stl", verts, faces)
    goals = {
        "left_branch": cap_faces(verts, faces, tip_left, d_left, 1.8),
        "right_branch": cap_faces(verts, faces, tip_right, d_right, 1.8),
    }
    (HERE / "bifurcation_goals.json").write_text(
        json.dumps(goals, indent=2) + "\n"
    )
    return ("bifurcation.stl", len(faces), ["bifurcation_goals.json"])


def arch():
    """Aortic-arch-like bend with three stub branches off its crown."""
    arch_c = np.array([0.0, 0.0, 30.0])

    def sdf(p):
        inflow = capsule_dist(p, [26, 0, 2], [26, 0, 30], 4.0)
        bend = arc_dist(p, arch_c, 26.0, 4.0, 0.0, np.pi)
        outflow = capsule_dist(p, [-26, 0, 30], [-26, 0, 2], 4.0)
        d = np.minimum(inflow, np.minimum(bend, outflow))
        for bx in (-13.0, 0.0, 13.0):
            ang = np.arccos(np.clip(bx / 26.0, -1.0, 1.0))
            base = arch_c + 26.0 * np.array([np.cos(ang), 0.0, np.sin(ang)])
            tip = base + np.array([0.0, 0.0, 14.0])
            d = np.minimum(d, capsule_dist(p, base, tip, 1.7))
        return d

    verts, faces = extract(sdf, [-34, -7, -2], [34, 7, 74], 0.8)
    write_stl_binary(HERE / "arch.stl", verts, faces)
    goals = {}
    for name, bx in (("stub_a", -13.0), ("stub_b", 0.0), ("stub_c", 13.0)):
        ang = np.arccos(np.clip(bx / 26.0, -1.0, 1.0))
        base = arch_c + 26.0 * np.array([np.cos(ang), 0.0, np.sin(ang)])
        tip = base + np.array([0.0, 0.0, 14.0])
        goals[name] = cap_faces(verts, faces, tip, [0, 0, 1], 1.7)
    goals["outflow"] = cap_faces(verts, faces, [-26, 0, 2], [0, 0, -1], 4.0)
    (HERE / "arch_goals.json").write_text(json.dumps(goals, indent=2) + "\n")
    return ("arch.stl", len(faces), ["arch_goals.json"])


def dense_tube():
    """Fine-resolution tube (~10k+ faces) for query benchmarks."""
    def sdf(p):
        return capsule_dist(p, [0, 0, 2], [0, 0, 38], 2.0)

    verts, faces = extract(sdf, [-4, -4, -2], [4, 4, 44], 0.33)
    write_stl_binary(HERE / "tube_dense.stl", verts, faces)
    goal = cap_faces(verts, faces, [0, 0, 38], [0, 0, 1], 2.0)
    (HERE / "tube_dense_goal.json").write_text(
        json.dumps({"distal_cap": goal}, indent=2) + "\n"
    )
    return ("tube_dense.stl", len(faces), ["tube_dense_goal.json"])


def main():
    np.random.seed(0)
    entries = [straight_tube(), bifurcation(), arch(), dense_tube()]
    manifest = {
        "units": "mm",
        "format": "binary STL",
        "generator": "generate_fixtures.py",
        "meshes": [
            {"file": name, "faces": count, "goals": goals}
            for name, count, goals in entries
        ],
    }
    (HERE / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    print("wrote manifest.json")


if __name__ == "__main__":
    main()
