from pathlib import Path

from workbench.core.batch_processor import CorpusRunner
from workbench.core.boolean_monoid import lattice_complex_algebra
from workbench.core.export_services import ExportService
from workbench.core.kr_frame import check_frame_axioms, frame_from_lattice
from workbench.core.lattice_core import is_epic_sublattice_bounded, is_modular
from workbench.core.morphisms import build_UV
from workbench.models.schemas import CellStatus, CorpusRow, CorpusSummary


class TestRendering:
    def setup_method(self):
        self.service = ExportService(export_dir="unused")

    def test_hasse_dot(self, c3):
        dot = self.service.hasse_dot(c3)
        assert "rankdir=BT;" in dot
        assert "n0 -> n1;" in dot and "n1 -> n2;" in dot
        assert 'n1 [label="m"];' in dot

    def test_modularity_witness(self, n5):
        text = self.service.render_modularity(n5, *is_modular(n5))
        assert "FAILS" in text and "witness x=" in text

    def test_frame_report(self, n5):
        F = frame_from_lattice(n5)
        text = self.service.render_frame_report(check_frame_axioms(F), len(F.triples()))
        assert text.endswith("KR frame: no")

    def test_uv_conclusion(self, c3, m3):
        U, V = build_UV(c3, 0b101)
        assert self.service.render_uv(c3, 0b101, U, V).endswith("U ⊊ V: yes")
        U, V = build_UV(m3, m3.carrier)
        assert self.service.render_uv(m3, m3.carrier, U, V).endswith("U = V")

    def test_epi_lists_witness(self, c3):
        text = self.service.render_epi(is_epic_sublattice_bounded(c3, 0b101, [c3]))
        assert "NotEpic" in text and "f = [0, 1, 2]" in text and "g = [0, 0, 2]" in text

    def test_algebra_marks_waived_frames(self, n5):
        text = self.service.render_algebra(lattice_complex_algebra(n5, waive=True))
        assert "WARNING" in text


class TestCorpusTable:
    def setup_method(self):
        self.service = ExportService(export_dir="unused")

    def test_empty_corpus(self):
        text = self.service.render_corpus(CorpusSummary(directory="empty"))
        assert "(no lattice files)" in text
        assert "0 file(s), 0 invariant failure(s)" in text

    def test_rows_become_columns(self):
        summary = CorpusSummary(directory="d", rows=[
            CorpusRow(lattice="C2", path="c2.json", size=2, cells={"modular": CellStatus.PASS}),
            CorpusRow(lattice="bad", path="bad.json", error="unreadable"),
        ], invariant_failures=CorpusRunner.count_failures([
            CorpusRow(lattice="bad", path="bad.json", error="unreadable"),
        ]))
        df = self.service.corpus_frame(summary)
        assert list(df["lattice"]) == ["C2", "bad"]
        assert {"modular", "error"} <= set(df.columns)
        assert "1 invariant failure(s)" in self.service.render_corpus(summary)


class TestWriting:
    def test_explicit_path(self, tmp_path):
        service = ExportService(export_dir=str(tmp_path / "exports"))
        target = tmp_path / "out" / "report.txt"
        assert service.write("hello", str(target)) == str(target)
        assert target.read_text() == "hello\n"

    def test_generated_filename(self, tmp_path):
        service = ExportService(export_dir=str(tmp_path / "exports"))
        path = Path(service.write("{}", stem="embedding", extension="json"))
        assert path.parent == tmp_path / "exports"
        assert path.name.startswith("embedding_") and path.suffix == ".json"
