import xml.etree.ElementTree as ET

from halftheta.cones import Instance
from halftheta.instance_io import generate_instance
from halftheta.render import plot_campaign, plot_instance, render_svg, svg_document
from halftheta.report import run_campaign
from halftheta.verify import run_pipeline

NS = "{http://www.w3.org/2000/svg}"


def parse(text):
    return ET.fromstring(text.encode())


def test_empty_instance():
    root = parse(svg_document(Instance.build([]), {}))
    assert root.tag == NS + "svg" and root.get("version") == "1.1"
    assert not root.findall(f".//{NS}circle")


def test_triangle():
    inst = Instance.build([(0, 0), (1, 2), (-1, 4)], [(0, 2)])
    p = run_pipeline(inst)
    root = parse(svg_document(inst, {"theta6": p.ht.graph, "vis": p.vis}))
    assert len(root.findall(f".//{NS}circle")) == 3
    assert len(root.findall(f".//{NS}text")) == 3
    lines = root.findall(f".//{NS}line")
    assert sum(1 for e in lines if e.get("class") == "constraint") == 1
    assert sum(1 for e in lines if e.get("class") == "edge theta6") == 3
    # constraints are drawn thicker than any graph edge
    widths = {e.get("class"): float(e.get("stroke-width")) for e in lines}
    assert widths["constraint"] > max(v for k, v in widths.items() if k != "constraint")


def test_files_written(tmp_path):
    inst = generate_instance(2, 25, 8)
    p = run_pipeline(inst)
    render_svg(inst, {"g6": p.g6}, tmp_path / "a.svg")
    parse((tmp_path / "a.svg").read_text())
    plot_instance(inst, {"g6": p.g6}, tmp_path / "a.png")
    recs = [r for r in run_campaign(range(3), 3, 15, workers=1) if r["type"] == "instance"]
    plot_campaign(recs, tmp_path / "c.png")
    assert (tmp_path / "a.png").stat().st_size > 1000
    assert (tmp_path / "c.png").stat().st_size > 1000
