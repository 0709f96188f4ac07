"""Word and answer normalization.

One rule everywhere: Unicode NFC, trim, collapse internal whitespace to
single spaces, case-fold. Word identity in the graph and quiz grading both
use this, so "Gato " and "gato" are the same word and the same answer.
Case-folding is a no-op for unicameral scripts (Korean, Japanese, ...).
"""

import re
import unicodedata

_WS = re.compile(r"\s+")

_LANG = re.compile(r"^[a-z0-9-]+$")


def normalize(text: str) -> str:
    text = unicodedata.normalize("NFC", text)
    text = _WS.sub(" ", text.strip())
    return text.casefold()


def normalize_language(code: str) -> str:
    """Validate and canonicalize a BCP-47-style language tag (lowercased)."""
    from .errors import InvalidLanguage

    code = code.strip().lower()
    if not code or not _LANG.match(code):
        raise InvalidLanguage(f"invalid language code: {code!r}")
    return code
