"""
Workbench runner script
Provides easy startup and management commands
"""
import sys
import os

# Add project root to Python path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from workbench.cli import main  # noqa: E402
from workbench.utils.config import settings  # noqa: E402


def banner():
    """Print the startup banner to stderr, keeping stdout for reports"""
    print("=" * 60, file=sys.stderr)
    print(f"🔷 {settings.APP_NAME} v{settings.APP_VERSION}", file=sys.stderr)
    print(f"📍 Corpus: {settings.CORPUS_DIR}", file=sys.stderr)
    print(f"📍 Gates: MAX_N={settings.MAX_N}, MAX_EXHAUSTIVE={settings.MAX_EXHAUSTIVE}", file=sys.stderr)
    print("=" * 60, file=sys.stderr)


if __name__ == "__main__":
    if len(sys.argv) > 1 and sys.argv[1] == "corpus":
        banner()
    sys.exit(main(sys.argv[1:]))
