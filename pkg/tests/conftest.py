import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import pytest

from corpuskit.documents import Document


@pytest.fixture
def make_doc():
    def _make(doc_id, text="some text", **kwargs):
        doc = Document(id=doc_id, text=text, **kwargs)
        doc.word_count = len(text.split())
        return doc

    return _make
