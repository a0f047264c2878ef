import json
from fractions import Fraction as F

import pytest
from hypothesis import given

from debtnet import FinancialNetwork, ParseError, StrategyProfile, parse_network, serialize_network
from debtnet import cli, io
from debtnet import scenarios as sc
from debtnet.errors import ConvergenceError

from .strategies import networks


@given(networks())
def test_roundtrip(net):
    assert parse_network(serialize_network(net)) == net


def test_amounts_are_read_exactly():
    doc = {"banks": [{"id": "a", "external": 0.1}, {"id": "b", "external": "8/9"}], "liabilities": []}
    net = parse_network(json.dumps(doc))
    assert net.externals == (F(1, 10), F(8, 9))
    assert '"8/9"' in serialize_network(net)


def test_duplicate_edges_summed_and_labels_kept():
    doc = {
        "banks": [{"id": "x"}, {"id": "y"}],
        "liabilities": [{"from": "x", "to": "y", "amount": 1}, {"from": "x", "to": "y", "amount": "1/2"}],
    }
    net = parse_network(doc)
    assert net.liabilities[0][1] == F(3, 2) and net.bank_labels() == ("x", "y")


@pytest.mark.parametrize(
    "doc, fragment",
    [
        ('{"banks": [{"id": "a"}], "liabilities": [{"from": "a", "to": "z", "amount": 1}]}', "'z'"),
        ('{"banks": [{"id": "a"}, {"id": "a"}]}', "duplicate"),
        ('{"banks": [{"id": "a", "external": -1}]}', "banks[0].external"),
        ('{"banks": [{"id": "a"}], "default_costs": {"alpha": 2}}', "alpha"),
        ('{"banks": [{"id": "a"}], "extra": 1}', "extra"),
        ('{"banks": [{"id": "a"}], "liabilities": [{"from": "a", "to": "a", "amount": 1}]}', "itself"),
        ('{"banks": [', "line 1"),
        ('{"banks": [{"id": "a", "external": "x"}]}', "banks[0].external"),
    ],
)
def test_parse_errors_name_the_problem(doc, fragment):
    with pytest.raises(ParseError) as info:
        parse_network(doc)
    assert fragment in str(info.value)


def test_profile_syntax():
    net = sc.fig8()
    prof = io.parse_profile(net, "v1<-v4;v2<-v4")
    assert prof == StrategyProfile.from_edges(5, [(3, 0), (3, 1)])
    assert io.format_profile(net, prof) == "v1<-v4;v2<-v4"
    with pytest.raises(ParseError):
        io.parse_profile(net, "v1-v4")
    with pytest.raises(ParseError):
        io.parse_profile(net, "v1<-v9")


def test_scalar_sentinels():
    assert io.scalar(float("inf")) == "infinity"
    assert io.scalar(None) == "undefined"
    assert io.scalar(F(3, 2)) == "3/2"


@pytest.fixture
def fig1_file(tmp_path):
    path = tmp_path / "fig1.json"
    path.write_text(serialize_network(sc.fig1()))
    return str(path)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip().startswith("{") else out)


def test_clear(capsys, fig1_file):
    code, out = run(capsys, "clear", fig1_file)
    assert code == 0 and out["liquidity"] == "48/5" and out["defaults"] == ["v2", "v3", "v4"]
    code, out = run(capsys, "clear", fig1_file, "--float")
    assert code == 0 and abs(float(out["liquidity"]) - 9.6) < 1e-9


def test_inject(capsys, fig1_file):
    code, out = run(capsys, "inject", fig1_file, "--budget", "8/5", "--policy", "greedy")
    assert code == 0 and out["liquidity_increase"] == "12/5"
    assert [t["bank"] for t in out["trace"]] == ["v3", "v2"]
    code, out = run(capsys, "inject", fig1_file, "--budget", "8/5", "--policy", "optimal")
    assert out["plan"] == [{"amount": "8/5", "bank": "v4"}] and out["liquidity_increase"] == "16/5"
    code, out = run(capsys, "inject", fig1_file, "--budget", "8/5", "--policy", "enumerative")
    assert out["liquidity_increase"] == "16/5"


def test_remove_debt(capsys, fig1_file):
    code, out = run(capsys, "remove-debt", fig1_file)
    assert code == 0 and out["value"] == "56/5"
    code, out = run(capsys, "remove-debt", fig1_file, "--objective", "greedy")
    assert out["removed"] == [{"amount": "2", "from": "v4", "to": "v5"}]
    code, _ = run(capsys, "remove-debt", fig1_file, "--objective", "min-forgiven-target-solvent")
    assert code == 2
    code, _ = run(capsys, "remove-debt", fig1_file, "--objective", "min-forgiven-target-solvent", "--target", "v9")
    assert code == 2


def test_game(capsys, tmp_path):
    path = tmp_path / "fig8.json"
    path.write_text(serialize_network(sc.fig8()))
    code, out = run(capsys, "game", str(path), "--dynamics")
    assert code == 0 and out["outcome"] == "cycle" and out["cycle"][1] == "v1<-v4"
    code, out = run(capsys, "game", str(path), "--enumerate")
    assert out["equilibria"] == []
    code, out = run(capsys, "game", str(path), "--report")
    assert out["poa"] == "undefined" and len(out["cycle"]) == 4
    code, out = run(capsys, "game", str(path), "--dynamics", "--start", "v1<-v4", "--max-steps", "1")
    assert out["outcome"] == "truncated"
    code, _ = run(capsys, "game", str(path), "--report", "--policy", "optimal:1")
    assert code == 2


def test_scenario_commands(capsys, tmp_path):
    code, out = run(capsys, "scenario", "--list")
    assert code == 0 and "fig1" in out
    code, out = run(capsys, "scenario", "fig7", "n=4", "--verify")
    assert out["verified"] is True
    target = tmp_path / "f.json"
    assert cli.main(["scenario", "fig6", "Z=5", "--emit", str(target)]) == 0
    assert parse_network(target.read_text()) == sc.fig6(5).replace(labels=("v1", "v2", "v3"))
    code, _ = run(capsys, "scenario", "fig6", "Z")
    assert code == 2


def test_random_network_is_seeded(capsys):
    a = run(capsys, "random-network", "--seed", "3", "--banks", "4")[1]
    b = run(capsys, "random-network", "--seed", "3", "--banks", "4")[1]
    assert a == b and len(a["banks"]) == 4
    tree = run(capsys, "random-network", "--seed", "3", "--banks", "5", "--kind", "tree")[1]
    assert len(tree["liabilities"]) == 4


def test_exit_codes(capsys, tmp_path, fig1_file, monkeypatch):
    assert cli.main(["clear", str(tmp_path / "missing.json")]) == 2
    assert cli.main(["bogus"]) == 2
    big = FinancialNetwork.from_edges([0] * 24, {(i, i + 1): 1 for i in range(23)})
    path = tmp_path / "big.json"
    path.write_text(serialize_network(big))
    assert cli.main(["remove-debt", str(path)]) == 3

    def boom(net):
        raise ConvergenceError("no convergence")

    monkeypatch.setattr(cli, "greatest_clearing", boom)
    assert cli.main(["clear", fig1_file]) == 4
    capsys.readouterr()
