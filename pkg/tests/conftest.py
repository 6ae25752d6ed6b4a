"""Shared fixtures: small on-disk assessment jobs built from the synthetic
generators."""

import csv

import pytest

from mapbayes import SynthConfig, generate_pair, threshold_scores, write_grid

#: (box_id, group, cycle, kind) for a small but non-trivial job: two pool
#: groups, two cycles, a mix of classified and score inputs.
JOB_LAYOUT = [
    (0, "A", 1, "binary"),
    (0, "A", 2, "binary"),
    (1, "A", 1, "score"),
    (1, "A", 2, "score"),
    (2, "A", 1, "score"),
    (2, "A", 2, "score"),
    (3, "B", 1, "binary"),
    (3, "B", 2, "binary"),
    (4, "B", 1, "score"),
    (4, "B", 2, "score"),
    (5, "B", 1, "score"),
    (5, "B", 2, "score"),
]


def write_input_files(data_dir, box_id, cycle, kind, seed, rows=24, cols=24):
    """Write one observation/prediction raster pair; returns a manifest row."""
    cfg = SynthConfig(rows=rows, cols=cols, seed=seed, score_noise=0.25)
    obs, scores = generate_pair(cfg)
    obs_path = data_dir / f"obs_b{box_id}_c{cycle}.asc"
    write_grid(obs, obs_path)
    if kind == "score":
        sim_path = data_dir / f"score_b{box_id}_c{cycle}.asc"
        write_grid(scores, sim_path)
    else:
        sim_path = data_dir / f"sim_b{box_id}_c{cycle}.asc"
        write_grid(threshold_scores(scores, quantity=obs.n_ones), sim_path)
    return {
        "kind": kind,
        "sim": sim_path.name,
        "obs": obs_path.name,
        "exclusion": "",
        "box_id": str(box_id),
        "group": "",  # caller fills in
        "cycle": str(cycle),
    }


def build_job_tree(root, layout=JOB_LAYOUT):
    """Create rasters + inputs.csv + job config under `root`.

    Returns (config_path, out_dir).
    """
    data_dir = root / "data"
    data_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    for seed, (box_id, group, cycle, kind) in enumerate(layout, start=100):
        row = write_input_files(data_dir, box_id, cycle, kind, seed)
        row["group"] = group
        rows.append(row)
    manifest_path = data_dir / "inputs.csv"
    with manifest_path.open("w", newline="") as fh:
        writer = csv.DictWriter(
            fh, fieldnames=["kind", "sim", "obs", "exclusion", "box_id", "group", "cycle"]
        )
        writer.writeheader()
        writer.writerows(rows)
    out_dir = root / "out"
    config_path = root / "job.cfg"
    config_path.write_text(
        "# assessment job\n"
        f"inputs = {manifest_path}\n"
        f"out = {out_dir}\n"
        "threshold = quantity:obs\n"
        "convention = paper\n"
        "seed = 0\n"
    )
    return config_path, out_dir


@pytest.fixture
def job_tree(tmp_path):
    return build_job_tree(tmp_path)
