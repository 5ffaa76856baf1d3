import csv
import io
import json
import math
import xml.etree.ElementTree as ET

from twentyv import arctic
from twentyv.enumerate import sample_exact
from twentyv.lattice import build_domain
from twentyv.render import JSON_SCHEMA, config_svg, curve_svg, to_csv, to_json
from twentyv.weights import WeightParams


def test_csv_is_rfc4180():
    text = to_csv(["a", "b"], [(1, 'say "hi", ok'), (0.1, math.nan)])
    assert text.endswith("\r\n") and "\r\n" in text
    rows = list(csv.reader(io.StringIO(text)))
    assert rows == [["a", "b"], ["1", 'say "hi", ok'], ["0.1", "nan"]]


def test_json_is_sorted_and_finite():
    text = to_json({"b": [math.inf], "a": 1})
    data = json.loads(text)
    assert data == {"schema": JSON_SCHEMA, "a": 1, "b": ["inf"]}
    assert text.index('"a"') < text.index('"b"')


def test_config_svg_parses_and_is_deterministic():
    cfg = sample_exact(build_domain(7), seed=3)
    a = config_svg(cfg, phases=True)
    assert a == config_svg(cfg, phases=True)
    root = ET.fromstring(a.split("\n", 1)[1])
    assert root.tag.endswith("svg")
    assert len(root.findall("{http://www.w3.org/2000/svg}line")) > 0


def test_curve_svg_has_each_branch():
    p = WeightParams.combinatorial()
    branches = [arctic.branch(p, w, 11) for w in arctic.BRANCHES]
    svg = curve_svg(branches, title="uniform")
    root = ET.fromstring(svg.split("\n", 1)[1])
    titles = [e.text for e in root.iter("{http://www.w3.org/2000/svg}title")]
    assert titles == list(arctic.BRANCHES)
