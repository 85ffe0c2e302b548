import json
import subprocess
import sys

import pytest

from growthlab.cli import main
from growthlab.config import ConfigError, RunConfig

F2 = "< a, b | >\n"
Z2 = "< a, b | abAB >\n"
Z6 = "< a | a^6 >\n"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# --- config


def test_config_round_trip(tmp_path):
    cfg = RunConfig(command="cuts", presentation="x.txt", radius=9, schedule=[0.1, 0.01], r="3/2")
    path = tmp_path / "c.json"
    cfg.save(path)
    assert RunConfig.load(path) == cfg
    assert RunConfig.from_json(cfg.to_json()) == cfg


@pytest.mark.parametrize("bad", [{"radius": -1}, {"budget": -3}, {"format": "xml"}, {"epsilon": 0.0},
                                 {"level_weight": 0}, {"bogus": 1}, {"rounds": 1.5}])
def test_config_validation(bad):
    with pytest.raises(ConfigError):
        RunConfig().merged(bad)


def test_config_rejects_non_object():
    with pytest.raises(ConfigError):
        RunConfig.from_json("[1, 2]")


# --- subcommands


def test_balls_free(capsys, tmp_text):
    code, out, _ = run(capsys, "balls", "--presentation", tmp_text("f2.txt", F2), "--radius", "5")
    assert code == 0 and out.strip() == "[1, 5, 17, 53, 161, 485]"


def test_balls_upper_census(capsys, tmp_text):
    code, out, _ = run(capsys, "balls", "--presentation", tmp_text("z2.txt", Z2), "--radius", "3",
                       "--budget", "0")
    assert code == 0 and out.splitlines()[0] == "[1, 5, 17, 53]"


def test_egr_certify_finite_group(capsys, tmp_text):
    code, out, _ = run(capsys, "egr", "--presentation", tmp_text("z6.txt", Z6), "--radius", "10", "--certify")
    assert code == 0 and "witness (m, n) = (6, 10)" in out


def test_genset_file(capsys, tmp_text):
    code, out, _ = run(capsys, "balls", "--presentation", tmp_text("f2.txt", F2), "--genset",
                       tmp_text("s.txt", "a\nab\n"), "--radius", "2")
    assert code == 0 and out.strip() == "[1, 5, 17]"


def test_cuts_records_verify_and_tampering_is_caught(capsys, tmp_text, tmp_path):
    pres = tmp_text("f2.txt", F2)
    code, out, _ = run(capsys, "cuts", "--presentation", pres, "--max-weight", "8", "--format", "records")
    assert code == 0
    records = [json.loads(line) for line in out.splitlines()]
    assert {"x": "4", "radius": 3, "count": 53} .items() <= records[0].items()
    good = tmp_path / "cuts.jsonl"
    good.write_text(out)
    code, out, _ = run(capsys, "verify", "--input", str(good))
    assert code == 0 and out.startswith(f"{len(records)}/{len(records)}")
    bad = tmp_path / "bad.jsonl"
    bad.write_text(out_tampered(good.read_text()))
    code, _, err = run(capsys, "verify", "--input", str(bad))
    assert code == 1 and "record 1 (cut)" in err


def out_tampered(text):
    first, rest = text.split("\n", 1)
    return first.replace('"count":53', '"count":64') + "\n" + rest


def test_every_subcommand_emits_verifiable_records(capsys, tmp_text, tmp_path):
    f2, z6 = tmp_text("f2.txt", F2), tmp_text("z6.txt", Z6)
    pts = tmp_text("pts.txt", "\n".join(str(1 - 1 / n) for n in range(1, 40)))
    commands = [
        ["balls", "--presentation", f2, "--radius", "4"],
        ["egr", "--presentation", z6, "--radius", "8"],
        ["cuts", "--presentation", f2, "--max-weight", "6"],
        ["below-r", "--presentation", z6, "--r", "3/2", "--max-genset-length", "1", "--rounds", "8"],
        ["explore", "--presentation", f2, "--max-length", "3", "--radius", "5"],
        ["cusp", "--base", f2, "--radius", "4", "--steps", "2"],
        ["ordinal", "--expr", "w^2 + w", "--realize", "--depth", "3"],
        ["ordinal-estimate", "--input", pts],
    ]
    lines = []
    for argv in commands:
        code, out, _ = run(capsys, *argv, "--format", "records")
        assert code == 0, argv
        assert out.strip(), argv
        lines.append(out)
    path = tmp_path / "all.jsonl"
    path.write_text("".join(lines))
    code, out, _ = run(capsys, "verify", "--input", str(path))
    assert code == 0 and out.split("/")[0] == out.split("/")[1].split()[0]


def test_output_is_deterministic(capsys, tmp_text):
    argv = ["explore", "--presentation", tmp_text("f2.txt", F2), "--max-length", "3", "--radius", "6",
            "--format", "records"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_ordinal_human_output(capsys):
    code, out, _ = run(capsys, "ordinal", "--expr", "(w + 1) * w")
    assert code == 0 and out.strip() == "w^2"


def test_ordinal_estimate_is_labelled(capsys, tmp_text):
    pts = tmp_text("pts.txt", "\n".join(str(1 - 1 / n) for n in range(1, 51)))
    code, out, _ = run(capsys, "ordinal-estimate", "--input", pts, "--schedule", "0.01,0.001")
    assert code == 0 and out.startswith("w  (heuristic")


def test_config_file_overrides_flags(capsys, tmp_text):
    pres = tmp_text("f2.txt", F2)
    cfg = tmp_text("c.json", json.dumps({"radius": 2}))
    code, out, _ = run(capsys, "balls", "--presentation", pres, "--radius", "5", "--config", cfg)
    assert code == 0 and out.strip() == "[1, 5, 17]"


def test_output_file(capsys, tmp_text, tmp_path):
    dest = tmp_path / "out.txt"
    code, out, _ = run(capsys, "balls", "--presentation", tmp_text("f2.txt", F2), "--radius", "1",
                       "--output", str(dest))
    assert code == 0 and out == "" and dest.read_text().strip() == "[1, 5]"


# --- usage errors


@pytest.mark.parametrize("argv, message", [
    (["balls", "--presentation", "/nonexistent/p.txt"], "cannot read presentation"),
    (["balls"], "--presentation FILE is required"),
    (["balls", "--presentation", "@BAD", "--radius", "-2"], "radius must be a nonnegative integer"),
    (["ordinal", "--expr", "w^^2"], "bad ordinal expression"),
    (["below-r", "--presentation", "@F2", "--r", "x"], "--r must be a rational"),
    (["verify", "--input", "@EMPTY"], "contains no records"),
    (["balls", "--presentation", "@BAD"], "expected '|'"),
    (["balls", "--presentation", "@F2", "--config", "@NOTJSON"], "not valid JSON"),
])
def test_usage_errors_exit_2(capsys, tmp_text, argv, message):
    files = {"@BAD": tmp_text("bad.txt", "< a, b >"), "@F2": tmp_text("f2.txt", F2),
             "@EMPTY": tmp_text("empty.jsonl", ""), "@NOTJSON": tmp_text("c.json", "{radius")}
    argv = [files.get(a, a) for a in argv]
    code, _, err = run(capsys, *argv)
    assert code == 2 and message in err


def test_unknown_subcommand_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_console_script_entry_point(tmp_text):
    pres = tmp_text("f2.txt", F2)
    done = subprocess.run([sys.executable, "-m", "growthlab.cli", "balls", "--presentation", pres,
                           "--radius", "2"], capture_output=True, text=True, check=False)
    assert done.returncode == 0 and done.stdout.strip() == "[1, 5, 17]"
