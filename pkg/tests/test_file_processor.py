import pytest

from workbench.core.exceptions import NotALattice, TooLarge, WorkbenchException
from workbench.core.file_processor import FileProcessorException, file_processor
from workbench.core.boolean_monoid import algebra_dump
from workbench.repositories import CorpusRepository


class TestLatticeFiles:
    def test_load_corpus_file(self, corpus_dir):
        L = file_processor.load_lattice(corpus_dir / "chain_3.json")
        assert L.name == "C3" and L.labels == ("0", "m", "1")

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileProcessorException, match="not found"):
            file_processor.load_lattice(tmp_path / "absent.json")

    def test_wrong_extension(self, tmp_path):
        path = tmp_path / "lattice.txt"
        path.write_text("{}")
        with pytest.raises(FileProcessorException, match="Invalid file type"):
            file_processor.load_lattice(path)

    def test_malformed_json(self, write_json):
        with pytest.raises(FileProcessorException):
            file_processor.load_lattice(write_json("bad.json", "{not json"))

    def test_cover_out_of_range(self, write_json):
        path = write_json("range.json", {"n": 2, "covers": [[0, 5]]})
        with pytest.raises(FileProcessorException, match="out of range"):
            file_processor.load_lattice(path)

    def test_structural_errors_pass_through(self, write_json):
        path = write_json("v.json", {"n": 3, "covers": [[0, 1], [0, 2]]})
        with pytest.raises(WorkbenchException):
            file_processor.load_lattice(path)
        bowtie = {"n": 6, "covers": [[0, 1], [0, 2], [1, 3], [2, 3], [1, 4], [2, 4], [3, 5], [4, 5]]}
        with pytest.raises(NotALattice):
            file_processor.load_lattice(write_json("bowtie.json", bowtie))

    def test_size_gate(self, corpus_dir):
        with pytest.raises(TooLarge):
            file_processor.load_lattice(corpus_dir / "m3_stacked.json", max_n=8)


class TestOtherInputs:
    def test_frame_file(self, write_json):
        path = write_json("frame.json", {"name": "Fr", "n": 2, "zero": 0,
                                         "triples": [[0, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0], [1, 1, 1]]})
        F = file_processor.load_frame(path)
        assert F.name == "Fr" and len(F.triples()) == 5

    def test_algebra_file(self, write_json, cm_c3):
        path = write_json("alg.json", algebra_dump(cm_c3).model_dump())
        A = file_processor.load_algebra(path)
        assert A.fusion_atoms == cm_c3.fusion_atoms

    def test_targets_bare_list(self, write_json):
        path = write_json("targets.json", [{"name": "C2", "n": 2, "covers": [[0, 1]]}])
        assert [W.name for W in file_processor.load_targets(path)] == ["C2"]

    def test_targets_with_paths(self, tmp_path, corpus_dir):
        path = tmp_path / "targets.json"
        path.write_text(f'{{"paths": ["{(corpus_dir / "m3.json").as_posix()}"], '
                        f'"lattices": [{{"name": "C2", "n": 2, "covers": [[0, 1]]}}]}}')
        assert [W.name for W in file_processor.load_targets(path)] == ["C2", "M3"]

    def test_targets_schema_error(self, write_json):
        with pytest.raises(FileProcessorException):
            file_processor.load_targets(write_json("t.json", {"lattices": [{"covers": []}]}))


class TestCorpusRepository:
    def test_sorted_listing(self, corpus_dir):
        repo = CorpusRepository(corpus_dir)
        names = [p.name for p in repo.list_files()]
        assert names == sorted(names)
        assert repo.count_all() == 14

    def test_missing_directory(self, tmp_path):
        with pytest.raises(WorkbenchException):
            CorpusRepository(tmp_path / "nowhere").list_files()

    def test_bad_files_are_skipped(self, tmp_path, corpus_dir):
        (tmp_path / "c2.json").write_text((corpus_dir / "chain_2.json").read_text())
        (tmp_path / "broken.json").write_text("[")
        loaded = CorpusRepository(tmp_path).get_all()
        assert [L.name for _, L in loaded] == ["C2"]
