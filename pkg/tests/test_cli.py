import json

import pytest

from workbench.cli import EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE, build_parser, main, resolve_config
from workbench.core.boolean_monoid import algebra_dump
from workbench.core.morphisms import replay_epi_verdict
from workbench.models.schemas import EpiOutcome, EpiTestReport, InputKind
from workbench.utils.config import get_settings


@pytest.fixture
def lattice_path(corpus_dir):
    return lambda name: str(corpus_dir / f"{name}.json")


class TestArguments:
    def test_resolve_config(self, lattice_path):
        args = build_parser().parse_args(["embed", lattice_path("m3"), "--sublattice", "0, 1,4", "--perturb"])
        config = resolve_config(args)
        assert config.sublattice == [0, 1, 4]
        assert config.perturb and config.input_kind == InputKind.LATTICE

    def test_missing_sublattice(self, lattice_path):
        assert main(["embed", lattice_path("m3")]) == EXIT_USAGE

    def test_unknown_command(self):
        assert main(["frobnicate"]) == EXIT_USAGE

    def test_malformed_sublattice(self, lattice_path):
        assert main(["build-uv", lattice_path("chain_3"), "--sublattice", "0,x"]) == EXIT_USAGE

    def test_sublattice_out_of_range(self, lattice_path):
        assert main(["build-uv", lattice_path("chain_3"), "--sublattice", "0,9"]) == EXIT_USAGE

    def test_zero_size_gates_are_rejected(self, lattice_path):
        assert main(["check-modular", lattice_path("m3"), "--max-n", "0"]) == EXIT_USAGE
        assert main(["check-axioms", lattice_path("m3"), "--max-exhaustive", "0"]) == EXIT_USAGE


class TestCommands:
    def test_check_modular(self, lattice_path, capsys):
        assert main(["check-modular", lattice_path("m3")]) == EXIT_OK
        assert main(["check-modular", lattice_path("n5")]) == EXIT_NEGATIVE
        assert "FAILS" in capsys.readouterr().out

    def test_unparseable_lattice(self, write_json):
        path = write_json("v.json", {"n": 3, "covers": [[0, 1], [0, 2]]})
        assert main(["check-modular", path]) == EXIT_USAGE

    def test_build_frame(self, lattice_path):
        assert main(["build-frame", lattice_path("m3")]) == EXIT_OK
        assert main(["build-frame", lattice_path("n5")]) == EXIT_NEGATIVE

    def test_build_cm_waiver(self, lattice_path, capsys):
        assert main(["build-cm", lattice_path("n5")]) == EXIT_NEGATIVE
        assert main(["build-cm", lattice_path("n5"), "--waive-frame-check"]) == EXIT_OK
        assert "WARNING" in capsys.readouterr().out

    def test_check_axioms_from_dump(self, write_json, cm_c3, capsys):
        path = write_json("alg.json", algebra_dump(cm_c3).model_dump())
        assert main(["check-axioms", path, "--algebra", "--format", "json"]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["atoms"] == 3 and all(a["passed"] for a in report["axioms"])

    def test_e_lattice_and_maddux(self, lattice_path):
        assert main(["e-lattice", lattice_path("m3")]) == EXIT_OK
        assert main(["verify-maddux", lattice_path("m3")]) == EXIT_OK
        assert main(["verify-maddux", lattice_path("n5")]) == EXIT_NEGATIVE

    def test_e_lattice_respects_size_gate(self, write_json, cm_m3):
        path = write_json("alg.json", algebra_dump(cm_m3).model_dump())
        assert main(["e-lattice", path, "--algebra"]) == EXIT_OK
        assert main(["e-lattice", path, "--algebra", "--max-n", "4"]) == EXIT_USAGE

    def test_embed_rejects_incomplete_sublattice(self, lattice_path):
        assert main(["embed", lattice_path("chain_3"), "--sublattice", "0,1"]) == EXIT_NEGATIVE

    def test_dot_output(self, lattice_path, tmp_path):
        dot = tmp_path / "m3.dot"
        assert main(["check-modular", lattice_path("m3"), "--dot", str(dot)]) == EXIT_OK
        assert dot.read_text().startswith('digraph "M3"')


class TestPipelineCommand:
    def test_proper_sublattice(self, lattice_path, capsys):
        assert main(["pipeline", lattice_path("chain_3"), "--sublattice", "0,2"]) == EXIT_OK
        assert capsys.readouterr().out.rstrip().endswith("U ⊊ V: yes")

    def test_whole_lattice(self, lattice_path, capsys):
        assert main(["pipeline", lattice_path("m3"), "--sublattice", "0,1,2,3,4"]) == EXIT_OK
        assert capsys.readouterr().out.rstrip().endswith("U = V")

    def test_non_modular(self, lattice_path, capsys):
        assert main(["pipeline", lattice_path("n5"), "--sublattice", "0,4"]) == EXIT_NEGATIVE
        assert capsys.readouterr().out.rstrip().endswith("Aborted at stage: frame")


class TestEpiCommand:
    def test_json_report_replays(self, lattice_path, write_json, tmp_path):
        targets = write_json("targets.json", {"paths": [lattice_path("boolean_2x2")]})
        out = tmp_path / "epi.json"
        code = main(["epi-test", lattice_path("boolean_2x2"), "--sublattice", "0,3",
                     "--targets", targets, "--format", "json", "--output", str(out)])
        assert code == EXIT_NEGATIVE
        report = EpiTestReport.model_validate_json(out.read_text())
        assert report.lattice_verdict.outcome == EpiOutcome.NOT_EPIC
        assert report.algebra_verdict.outcome == EpiOutcome.NOT_EPIC
        assert replay_epi_verdict(report.lattice_verdict)
        assert replay_epi_verdict(report.algebra_verdict)

    def test_whole_lattice_is_epic(self, lattice_path, write_json):
        targets = write_json("targets.json", [{"name": "C2", "n": 2, "covers": [[0, 1]]}])
        assert main(["epi-test", lattice_path("chain_2"), "--sublattice", "0,1", "--targets", targets]) == EXIT_OK


class TestCorpusCommand:
    def test_empty_directory(self, tmp_path, capsys):
        assert main(["corpus", str(tmp_path)]) == EXIT_OK
        assert "(no lattice files)" in capsys.readouterr().out

    def test_missing_directory(self, tmp_path):
        assert main(["corpus", str(tmp_path / "nowhere")]) == EXIT_USAGE

    def test_corrupt_file_fails_run(self, tmp_path):
        (tmp_path / "broken.json").write_text("[")
        assert main(["corpus", str(tmp_path)]) == EXIT_NEGATIVE


class TestEnvironment:
    @pytest.fixture(autouse=True)
    def reset_settings(self):
        get_settings.cache_clear()
        yield
        get_settings.cache_clear()

    def test_max_n_from_environment(self, monkeypatch, lattice_path):
        monkeypatch.setenv("WORKBENCH_MAX_N", "3")
        assert main(["check-modular", lattice_path("m3")]) == EXIT_USAGE
        assert main(["check-modular", lattice_path("m3"), "--max-n", "5"]) == EXIT_OK

    def test_output_format_from_environment(self, monkeypatch, lattice_path, capsys):
        monkeypatch.setenv("WORKBENCH_OUTPUT_FORMAT", "json")
        assert main(["check-modular", lattice_path("m3")]) == EXIT_OK
        assert json.loads(capsys.readouterr().out)["modular"] is True
