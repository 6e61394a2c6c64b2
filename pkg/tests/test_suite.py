import io
import shutil

from qcr.catalog import Catalog, data_dir
from qcr.suite import run_paper_suite


def test_suite_passes():
    out = io.StringIO()
    results = run_paper_suite(jobs=1, out=out)
    assert results and all(r.passed for r in results), out.getvalue()
    names = {r.name for r in results}
    assert {"fig4-minimal", "fig6-slices", "fig7-consistent-unsat", "slicing-RCC8s_x_PAs"} <= names


def test_corrupted_projection_table_is_caught(tmp_path):
    root = tmp_path / "data"
    shutil.copytree(data_dir(), root)
    ma = root / "multialgebras" / "stc.ma"
    text = ma.read_text()
    text = text.replace("projection 1 2: TPP -> {<}", "projection 1 2: TPP -> {>}")
    text = text.replace("projection 1 2: TPPI -> {>}", "projection 1 2: TPPI -> {<}")
    ma.write_text(text)
    results = {r.name: r for r in run_paper_suite(Catalog(root))}
    assert not results["superdistributive-rcc8-pa-compose"].passed
    assert results["axioms-RCC8"].passed
