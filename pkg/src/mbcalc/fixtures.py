"""Builders for the fixture files shipped in ``mbcalc/data``.

``python -m mbcalc.fixtures`` rewrites them; the test suite checks the
shipped bytes against these builders.
"""
from __future__ import annotations

import sys
from pathlib import Path

from .catalog import hopf_family, theta_torus
from .fmt import FactDecl, MbsDocument, serialize, serialize_certificate

DATA = Path(__file__).parent / "data"


def cert_name(lower: str, upper: str) -> str:
    return f"certs/{lower}_{upper}.cert"


def hopf_document(p: int, q: int) -> MbsDocument:
    fam = hopf_family(p, q)
    facts = [FactDecl(lo, hi, cert_name(lo, hi)) for lo, hi in sorted(fam.certificates)]
    return MbsDocument(dict(fam.surfaces), facts)


def fixture_texts() -> dict[str, str]:
    """Relative path -> file contents for every shipped fixture."""
    files = {
        "hopf34.mbs": serialize(hopf_document(3, 4)),
        "hopf35.mbs": serialize(hopf_document(3, 5)),
        "theta.mbs": serialize(MbsDocument({"theta": theta_torus()})),
    }
    fam = hopf_family(3, 4, include_shortcut=True)
    for (lo, hi), cert in sorted(fam.certificates.items()):
        files[cert_name(lo, hi)] = serialize_certificate(cert)
    return files


def write_fixtures(target: Path = DATA) -> list[Path]:
    written = []
    for rel, text in fixture_texts().items():
        path = Path(target) / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        written.append(path)
    return written


if __name__ == "__main__":
    for path in write_fixtures(Path(sys.argv[1]) if len(sys.argv) > 1 else DATA):
        print(path)
