"""
Command-line front end
One command per construction; `pipeline` chains them and `corpus` runs every
invariant suite over a directory.

Exit codes: 0 success, 1 negative verdict or failed stage, 2 usage/parse error.
"""
from typing import Callable, Dict, List, Optional, Sequence
import argparse
import asyncio
import logging
import sys

from pydantic import ValidationError

from workbench.core.batch_processor import CorpusRunner
from workbench.core.boolean_monoid import (
    algebra_dump, check_ra_axioms, cm, e_lattice, lattice_complex_algebra, verify_maddux,
)
from workbench.core.exceptions import (
    ClosureFailure, ConditionsFailed, CycleInCovers, FrameInvalid, MismatchFound, NoBounds,
    NotAbelian, NotALattice, NotCompleteSublattice, NotModular, TooLarge, WorkbenchException,
)
from workbench.core.export_services import export_service
from workbench.core.file_processor import file_processor
from workbench.core.kr_frame import check_frame_axioms, frame_from_lattice
from workbench.core.lattice_core import is_epic_sublattice_bounded, is_modular, lattice_dump
from workbench.core.morphisms import (
    build_UV, complex_algebra_targets, default_lattice_targets, embedding_report, is_epic_subalgebra_bounded,
)
from workbench.core.pipeline import TheoremPipeline
from workbench.models.schemas import (
    Command, EpiOutcome, EpiTestReport, InputKind, MadduxReport, ModularityReport, OutputFormat,
    RunConfig, SubalgebraReport,
)
from workbench.models.structures import Lattice
from workbench.repositories import CorpusRepository
from workbench.utils.bitset import ElemSet, from_indices, to_indices
from workbench.utils.config import get_settings

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2

NEGATIVE_VERDICTS = (
    NotModular, NotCompleteSublattice, FrameInvalid, NotAbelian, ConditionsFailed, ClosureFailure, MismatchFound,
)
PARSE_ERRORS = (NotALattice, NoBounds, CycleInCovers, TooLarge)


class UsageError(Exception):
    pass


class WorkbenchArgumentParser(argparse.ArgumentParser):
    """Raises instead of exiting so main() owns the exit code"""

    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    common = WorkbenchArgumentParser(add_help=False)
    common.add_argument("--max-n", type=int, default=None,
                        help=f"largest lattice accepted (default {settings.MAX_N}, env WORKBENCH_MAX_N)")
    common.add_argument("--max-exhaustive", type=int, default=None,
                        help=f"largest atom count for element-level checks (default {settings.MAX_EXHAUSTIVE})")
    common.add_argument("--format", dest="output_format", choices=[f.value for f in OutputFormat], default=None)
    common.add_argument("--dot", dest="dot_path", default=None, help="write the Hasse diagram as DOT")
    common.add_argument("--targets", dest="targets_path", default=None, help="epi target lattices (JSON)")
    common.add_argument("--output", dest="output_path", default=None, help="write the report to a file")

    parser = WorkbenchArgumentParser(prog="workbench", description=settings.APP_NAME)
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.APP_VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(command: Command, help_text: str, sublattice: bool = False) -> argparse.ArgumentParser:
        p = sub.add_parser(command.value, parents=[common], help=help_text)
        p.add_argument("path", help="input file")
        if sublattice:
            p.add_argument("--sublattice", required=True, help="elements of K, e.g. 0,2")
        return p

    add(Command.CHECK_MODULAR, "modular law with a counterexample triple")
    add(Command.BUILD_FRAME, "ternary frame of a lattice and its four axioms")
    p = add(Command.BUILD_CM, "complex algebra of a lattice frame (or --frame file)")
    p.add_argument("--frame", action="store_true", help="input is a frame file")
    p.add_argument("--waive-frame-check", action="store_true")
    p = add(Command.CHECK_AXIOMS, "relation algebra axioms 1-10")
    p.add_argument("--algebra", action="store_true", help="input is an algebra dump")
    p = add(Command.E_LATTICE, "lattice of reflexive equivalence elements")
    p.add_argument("--algebra", action="store_true", help="input is an algebra dump")
    add(Command.VERIFY_MADDUX, "E(Cm L) = Id L")
    p = add(Command.EMBED, "embedding Cm(K) -> Cm(L)", sublattice=True)
    p.add_argument("--perturb", action="store_true", help="also check uniqueness by perturbation")
    add(Command.BUILD_UV, "subalgebras U <= V of Cm(L)", sublattice=True)
    add(Command.EPI_TEST, "bounded epicness of K in L and of U in V", sublattice=True)
    p = add(Command.PIPELINE, "full construction chain", sublattice=True)
    p.add_argument("--epi", action="store_true", help="include the bounded epi test")

    p = sub.add_parser(Command.CORPUS.value, parents=[common], help="run every invariant suite on a directory")
    p.add_argument("path", nargs="?", default=None, help=f"corpus directory (default {settings.CORPUS_DIR})")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    settings = get_settings()
    kind = InputKind.LATTICE
    if getattr(args, "frame", False):
        kind = InputKind.FRAME
    elif getattr(args, "algebra", False):
        kind = InputKind.ALGEBRA
    path = args.path if args.path is not None else settings.CORPUS_DIR
    return RunConfig(
        command=args.command,
        input_paths=[path],
        max_n=args.max_n if args.max_n is not None else settings.MAX_N,
        max_exhaustive=args.max_exhaustive if args.max_exhaustive is not None else settings.MAX_EXHAUSTIVE,
        output_format=args.output_format or settings.OUTPUT_FORMAT,
        dot_path=args.dot_path,
        targets_path=args.targets_path,
        output_path=args.output_path,
        sublattice=getattr(args, "sublattice", None),
        run_epi=getattr(args, "epi", False),
        waive_frame_check=getattr(args, "waive_frame_check", False),
        perturb=getattr(args, "perturb", False),
        input_kind=kind,
    )


class WorkbenchCLI:
    """Dispatches a resolved RunConfig to its command and returns the exit code"""

    def __init__(self, config: RunConfig):
        self.config = config
        self.json = config.output_format == OutputFormat.JSON

    # ------------------------------------------------------------------
    # Helpers
    # ------------------------------------------------------------------

    def emit(self, text: str, model=None) -> None:
        content = export_service.to_json(model) if self.json and model is not None else text
        if self.config.output_path:
            export_service.write(content, self.config.output_path)
        else:
            print(content)

    def load_lattice(self) -> Lattice:
        L = file_processor.load_lattice(self.config.input_paths[0], self.config.max_n)
        if self.config.dot_path:
            export_service.write(export_service.hasse_dot(L), self.config.dot_path)
        return L

    def sublattice(self, L: Lattice) -> ElemSet:
        elements = self.config.sublattice or []
        bad = [k for k in elements if not 0 <= k < L.n]
        if bad:
            raise UsageError(f"sublattice elements {bad} out of range for {L.name}")
        return from_indices(elements)

    def target_lattices(self) -> List[Lattice]:
        if self.config.targets_path:
            return file_processor.load_targets(self.config.targets_path, self.config.max_n)
        repository = CorpusRepository(get_settings().CORPUS_DIR)
        try:
            corpus = [L for _, L in repository.get_all(self.config.max_n)]
        except WorkbenchException as e:
            logger.warning(f"No default targets: {str(e)}")
            return []
        return default_lattice_targets(corpus, get_settings().TARGET_MAX_SIZE)

    # ------------------------------------------------------------------
    # Commands
    # ------------------------------------------------------------------

    def check_modular(self) -> int:
        L = self.load_lattice()
        modular, witness = is_modular(L)
        report = ModularityReport(lattice=L.name, n=L.n, modular=modular,
                                  witness=list(witness) if witness else None)
        self.emit(export_service.render_modularity(L, modular, witness), report)
        return EXIT_OK if modular else EXIT_NEGATIVE

    def build_frame(self) -> int:
        L = self.load_lattice()
        F = frame_from_lattice(L)
        report = check_frame_axioms(F)
        self.emit(export_service.render_frame_report(report, len(F.triples())), report)
        return EXIT_OK if report.all_passed else EXIT_NEGATIVE

    def build_cm(self) -> int:
        waive = self.config.waive_frame_check
        if self.config.input_kind == InputKind.FRAME:
            A = cm(file_processor.load_frame(self.config.input_paths[0]), waive=waive)
        else:
            A = lattice_complex_algebra(self.load_lattice(), waive=waive)
        self.emit(export_service.render_algebra(A), algebra_dump(A))
        return EXIT_OK

    def _algebra(self):
        if self.config.input_kind == InputKind.ALGEBRA:
            return file_processor.load_algebra(self.config.input_paths[0])
        return lattice_complex_algebra(self.load_lattice())

    def check_axioms(self) -> int:
        report = check_ra_axioms(self._algebra(), self.config.max_exhaustive, self.config.max_n)
        self.emit(export_service.render_axiom_report(report), report)
        return EXIT_OK if report.all_passed else EXIT_NEGATIVE

    def e_lattice(self) -> int:
        A = self._algebra()
        E, elements = e_lattice(A, max_n=self.config.max_n)
        self.emit(export_service.render_e_lattice(A, E, elements), lattice_dump(E))
        return EXIT_OK

    def verify_maddux(self) -> int:
        L = self.load_lattice()
        holds, identification = verify_maddux(L)
        report = MadduxReport(
            lattice=L.name,
            holds=holds,
            ideals=[to_indices(J) for J in identification.ideal_lattice.sets],
        )
        self.emit(export_service.render_maddux(L, identification.principal), report)
        return EXIT_OK

    def embed(self) -> int:
        L = self.load_lattice()
        K = self.sublattice(L)
        report = embedding_report(L, K, self.config.max_exhaustive, perturb=self.config.perturb)
        self.emit(export_service.render_embedding(L, report), report)
        return EXIT_OK

    def build_uv(self) -> int:
        L = self.load_lattice()
        K = self.sublattice(L)
        U, V = build_UV(L, K)
        report = SubalgebraReport(
            lattice=L.name,
            sublattice=to_indices(K),
            u_atoms=[to_indices(a) for a in U.atoms],
            v_atoms=[to_indices(a) for a in V.atoms],
            u_size=len(U),
            v_size=len(V),
        )
        self.emit(export_service.render_uv(L, K, U, V), report)
        return EXIT_OK

    def epi_test(self) -> int:
        L = self.load_lattice()
        K = self.sublattice(L)
        targets = self.target_lattices()
        lattice_verdict = is_epic_sublattice_bounded(L, K, targets)
        U, V = build_UV(L, K)
        algebra_verdict = is_epic_subalgebra_bounded(U, V, complex_algebra_targets(targets))
        report = EpiTestReport(lattice=L.name, sublattice=to_indices(K),
                               lattice_verdict=lattice_verdict, algebra_verdict=algebra_verdict)
        text = "\n".join([export_service.render_epi(lattice_verdict), export_service.render_epi(algebra_verdict)])
        self.emit(text, report)
        negative = EpiOutcome.NOT_EPIC in (lattice_verdict.outcome, algebra_verdict.outcome)
        return EXIT_NEGATIVE if negative else EXIT_OK

    def pipeline(self) -> int:
        L = self.load_lattice()
        K = self.sublattice(L)
        targets = self.target_lattices() if self.config.run_epi else []
        report = TheoremPipeline(self.config.max_exhaustive).run(L, K, run_epi=self.config.run_epi,
                                                                   lattice_targets=targets)
        self.emit(export_service.render_pipeline(report), report)
        return EXIT_OK if report.succeeded else EXIT_NEGATIVE

    def corpus(self) -> int:
        repository = CorpusRepository(self.config.input_paths[0])
        runner = CorpusRunner(repository, self.config.max_n, self.config.max_exhaustive)
        summary = asyncio.run(runner.run())
        if self.json:
            self.emit("", summary)
        else:
            self.emit(export_service.render_corpus(summary))
        return EXIT_OK if summary.invariant_failures == 0 else EXIT_NEGATIVE

    def run(self) -> int:
        handlers: Dict[Command, Callable[[], int]] = {
            Command.CHECK_MODULAR: self.check_modular,
            Command.BUILD_FRAME: self.build_frame,
            Command.BUILD_CM: self.build_cm,
            Command.CHECK_AXIOMS: self.check_axioms,
            Command.E_LATTICE: self.e_lattice,
            Command.VERIFY_MADDUX: self.verify_maddux,
            Command.EMBED: self.embed,
            Command.BUILD_UV: self.build_uv,
            Command.EPI_TEST: self.epi_test,
            Command.PIPELINE: self.pipeline,
            Command.CORPUS: self.corpus,
        }
        return handlers[self.config.command]()


def configure_logging() -> None:
    settings = get_settings()
    logging.basicConfig(
        level=getattr(logging, settings.LOG_LEVEL.upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    configure_logging()
    try:
        args = build_parser().parse_args(argv)
        config = resolve_config(args)
        return WorkbenchCLI(config).run()
    except (UsageError, ValidationError) as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except PARSE_ERRORS as e:
        print(f"invalid input: {e}", file=sys.stderr)
        return EXIT_USAGE
    except NEGATIVE_VERDICTS as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_NEGATIVE
    except WorkbenchException as e:
        # FileProcessorException and other ingestion failures
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
