import json

from roversweep.cli import main

SKEW3 = {
    "topology": "line",
    "coordinates": ["0", "1", "3"],
    "deadlines": [None, None, None],
    "robots": {"mode": "fixed", "positions": [1]},
    "faults": 0,
    "delta": None,
}


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


def test_solve_single_robot(tmp_path, capsys):
    path = write(tmp_path, "skew3.json", SKEW3)
    assert main(["solve", path]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0].startswith("4 ")


def test_solve_emits_verifiable_schedule(tmp_path, capsys):
    path = write(tmp_path, "skew3.json", SKEW3)
    sched = str(tmp_path / "sched.json")
    assert main(["solve", path, "--emit-schedule", sched]) == 0
    capsys.readouterr()
    assert main(["verify", path, sched]) == 0
    out = capsys.readouterr().out
    assert out.startswith("PASS")


def test_solve_reports_infeasible(tmp_path, capsys):
    doc = dict(SKEW3, deadlines=["0.25", None, None])
    path = write(tmp_path, "bad.json", doc)
    assert main(["solve", path]) == 1
    assert capsys.readouterr().out.strip() == "infeasible"


def test_generate_then_decide_matching_instance(tmp_path, capsys):
    out_path = str(tmp_path / "n3dm.json")
    assert main(["generate", "n3dm", "--a", "1", "--b", "1", "--c", "1", "--s", "3",
                 "-o", out_path]) == 0
    capsys.readouterr()
    assert main(["decide", out_path, "--delta", "35"]) == 0
    assert capsys.readouterr().out.strip() == "YES"
    assert main(["decide", out_path, "--delta", "34"]) == 1
    assert capsys.readouterr().out.strip() == "NO"


def test_verify_rejects_speed_violation(tmp_path, capsys):
    path = write(tmp_path, "skew3.json", SKEW3)
    sched = write(
        tmp_path,
        "fast.json",
        {"robots": [{"start": "1", "waypoints": [{"t": "0", "x": "1"}, {"t": "1", "x": "3"}]}]},
    )
    assert main(["verify", path, sched]) == 2
    err = capsys.readouterr().err
    assert "unit speed" in err


def test_verify_reports_first_violated_node(tmp_path, capsys):
    doc = dict(SKEW3, deadlines=[None, None, "2.5"], robots={"mode": "fixed", "positions": [0]})
    path = write(tmp_path, "line.json", doc)
    sched = write(
        tmp_path,
        "sweep.json",
        {"robots": [{"start": "0", "waypoints": [{"t": "0", "x": "0"}, {"t": "4", "x": "4"}]}]},
    )
    assert main(["verify", path, sched]) == 1
    out = capsys.readouterr().out
    assert "FAIL node=2" in out


def test_cap_refusal_exits_two(tmp_path, capsys):
    doc = {
        "topology": "line",
        "coordinates": [str(i) for i in range(50)],
        "deadlines": [None] * 50,
        "robots": {"mode": "fixed", "positions": [0, 25]},
        "faults": 1,
        "delta": "10",
    }
    path = write(tmp_path, "big.json", doc)
    assert main(["decide", path]) == 2
    assert "refused" in capsys.readouterr().err
    assert main(["decide", path, "--max-n", "50"]) == 1


def test_resilience_free_line(tmp_path, capsys):
    doc = {
        "topology": "line",
        "coordinates": ["0", "1", "2", "3", "4"],
        "deadlines": [None] * 5,
        "robots": {"mode": "free", "count": 6},
        "faults": 0,
        "delta": None,
    }
    path = write(tmp_path, "free.json", doc)
    assert main(["resilience", path, "--delta", "2"]) == 0
    assert capsys.readouterr().out.strip() == "2"
    small = write(tmp_path, "free2.json", dict(doc, robots={"mode": "free", "count": 2}))
    assert main(["resilience", small, "--delta", "0.1"]) == 1
    assert capsys.readouterr().out.strip() == "none"


def test_oracle_subcommand(tmp_path, capsys):
    path = write(tmp_path, "skew3.json", SKEW3)
    assert main(["oracle", path]) == 0
    assert capsys.readouterr().out.splitlines()[0].startswith("4 ")


def test_solve_ring_and_star_routing(tmp_path, capsys):
    ring_doc = {
        "topology": "ring",
        "edge_weights": ["1", "1", "1", "1"],
        "deadlines": [None] * 4,
        "robots": {"mode": "fixed", "positions": [0, 2]},
        "faults": 0,
        "delta": None,
    }
    path = write(tmp_path, "ring.json", ring_doc)
    assert main(["solve", path]) == 0
    assert capsys.readouterr().out.splitlines()[0].startswith("1 ")
    star_doc = {
        "topology": "star",
        "leaf_weights": ["1", "2"],
        "deadlines": ["1", "5"],
        "center_deadline": None,
        "robots": {"mode": "fixed", "positions": [2]},
        "faults": 0,
        "delta": None,
    }
    path = write(tmp_path, "star.json", star_doc)
    assert main(["solve", path]) == 0
    assert capsys.readouterr().out.splitlines()[0].startswith("4 ")


def test_emit_schedule_round_trips_on_every_topology(tmp_path, capsys):
    ring_doc = {
        "topology": "ring",
        "edge_weights": ["1", "2", "1", "3"],
        "deadlines": [None, "4", None, None],
        "robots": {"mode": "fixed", "positions": [1, 3]},
        "faults": 0,
        "delta": None,
    }
    star_doc = {
        "topology": "star",
        "leaf_weights": ["1", "2", "3"],
        "deadlines": [None, "9", "7"],
        "center_deadline": None,
        "robots": {"mode": "free", "count": 2},
        "faults": 1,
        "delta": None,
    }
    for name, doc in (("ring", ring_doc), ("star", star_doc)):
        inst = write(tmp_path, f"{name}.json", doc)
        sched = str(tmp_path / f"{name}-sched.json")
        assert main(["solve", inst, "--emit-schedule", sched]) == 0
        capsys.readouterr()
        assert main(["verify", inst, sched]) == 0
        assert capsys.readouterr().out.startswith("PASS")


def test_solve_respects_instance_bound(tmp_path, capsys):
    doc = dict(SKEW3, delta="3")  # optimum is 4
    path = write(tmp_path, "bounded.json", doc)
    assert main(["solve", path]) == 1
    assert capsys.readouterr().out.strip() == "infeasible"
    doc["delta"] = "4"
    path = write(tmp_path, "bounded2.json", doc)
    assert main(["solve", path]) == 0


def test_json_output_and_determinism(tmp_path, capsys):
    path = write(tmp_path, "skew3.json", SKEW3)
    assert main(["solve", path, "--json"]) == 0
    first = capsys.readouterr().out
    assert json.loads(first) == {"feasible": True, "optimum": "4", "decimal": "4"}
    assert main(["solve", path, "--json"]) == 0
    assert capsys.readouterr().out == first


def test_generate_random_is_seeded_and_parseable(tmp_path, capsys):
    assert main(["generate", "random", "--topology", "ring", "--n", "5",
                 "--k", "2", "--seed", "9"]) == 0
    first = capsys.readouterr().out
    assert main(["generate", "random", "--topology", "ring", "--n", "5",
                 "--k", "2", "--seed", "9"]) == 0
    assert capsys.readouterr().out == first
    from roversweep.instance import parse_instance

    spec = parse_instance(first)
    assert spec.topology.n == 5


def test_usage_error_on_bad_instance(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    assert main(["solve", str(path)]) == 2
    assert "error:" in capsys.readouterr().err
