import json
from fractions import Fraction as F

import pytest

from ietlab import io as ietio
from ietlab.fixed import krotter_cuts, sweep
from ietlab.line import FLOAT, ColoredLine, ContractError, parse_perm
from ietlab.metrics import scaled_report
from ietlab.optimal import build_optimal_protocol


def test_line_json_round_trip():
    ln = ColoredLine(((0, F(1, 3)), (1, F(2, 3))), 2)
    obj = ietio.line_to_json(ln)
    assert obj == {"mode": "rational", "segments": [{"color": 0, "num": "1", "den": "3"}, {"color": 1, "num": "2", "den": "3"}]}
    assert ietio.line_from_json(obj) == ln
    fl = ColoredLine.equal_colors(3, FLOAT)
    assert ietio.line_from_json(ietio.line_to_json(fl)) == fl


@pytest.mark.parametrize("perm,k,N", [("132", 2, 3), ("1324", 3, 2), ("13524", 4, 2)])
def test_variable_protocol_round_trip_is_byte_identical(tmp_path, perm, k, N):
    path = tmp_path / "p.json"
    ietio.save_protocol(build_optimal_protocol(perm, k, N), path)
    first = path.read_bytes()
    again = tmp_path / "q.json"
    ietio.save_protocol(ietio.load_protocol(path), again)
    assert again.read_bytes() == first
    obj = json.loads(first)
    assert list(obj) == ["perm", "k", "N", "cut_sets", "choices"]
    assert all("/" in c for cs in obj["cut_sets"] for c in cs)


def test_fixed_protocol_round_trip(tmp_path):
    proto = ietio.FixedProtocol(parse_perm("3142"), krotter_cuts(4, 1.5), 3, 65)
    path = tmp_path / "f.json"
    ietio.save_protocol(proto, path)
    loaded = ietio.load_protocol(path)
    assert loaded == proto
    assert len(loaded.cut_sets) == 65


def test_bad_protocol_json():
    with pytest.raises(ContractError):
        ietio.protocol_from_json({"perm": "132", "k": 2})
    with pytest.raises(ContractError):
        ietio.protocol_from_json({"perm": "132", "k": 2, "N": 2, "cut_sets": [["1/4", "3/4"]]})


def test_reports_csv():
    text = ietio.reports_csv([scaled_report(ColoredLine.equal_colors(2), 0, 3)])
    assert text == "N,L,k,segments,U,D,U_hat,D_hat,Phi\n0,3,2,2,1/2,1/2,1/1,1/1,1/1\n"


def test_field_csv_round_trip():
    res = sweep("321", ColoredLine.equal_colors(2, FLOAT), 2, spacing=0.1, keep_field=True)
    text = ietio.field_csv(res)
    assert text.splitlines()[0] == "c_1,c_2,Phi"
    assert ietio.read_field_csv(text) == [(tuple(p), v) for p, v in res.field]
