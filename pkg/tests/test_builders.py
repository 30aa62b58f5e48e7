from __future__ import annotations

import pytest

from metatag.corpus import RawDocument, extract_examples, parse_inline
from metatag.promptgen import (
    BEGIN_SENTINEL,
    END_SENTINEL,
    EXPLANATION_TEMPLATE,
    BundleShapeError,
    Message,
    PromptBundle,
    RagMode,
    Ratio,
    Role,
    Strategy,
    build_cot,
    build_few_shot,
    build_rag,
    build_zero_shot,
    explain_examples,
    load_codebook,
    load_span_meanings,
    load_system_prompt,
    render_explanation,
    sample_examples,
)

SYSTEM = load_system_prompt("system_tagging")
SYSTEM_COT = load_system_prompt("system_tagging_cot")
SYSTEM_RAG = load_system_prompt("system_tagging_rag")

DOC = RawDocument(id="review", text="The plot drifts without purpose. It never lands.")


@pytest.fixture(scope="module")
def pool(corpus):
    return extract_examples(corpus)


def test_render_explanation_fills_template():
    text = render_explanation(
        "thrown", "physically hurling an object", "a sudden forced change of circumstances"
    )
    assert text == (
        'The word "thrown" has a more basic contemporary meaning: in other contexts, '
        "it refers to physically hurling an object. In this example, it describes "
        "a sudden forced change of circumstances by comparing them to something "
        "literally physically hurling an object, which makes it a metaphorical usage."
    )


def test_render_explanation_structure():
    text = render_explanation("w0rd", "BASIC", "FIGURATIVE")
    assert text.count('"w0rd"') == 1
    assert text.count("BASIC") == 2
    assert text.count("FIGURATIVE") == 1


def test_render_explanation_rejects_empty():
    with pytest.raises(ValueError):
        render_explanation("", "b", "f")
    with pytest.raises(ValueError):
        render_explanation("w", "b", "")


def test_zero_shot_shape():
    bundle = build_zero_shot(DOC, SYSTEM)
    assert [m.role for m in bundle.messages] == [Role.SYSTEM, Role.USER]
    assert bundle.n_examples == 0
    assert bundle.strategy is Strategy.ZERO_SHOT
    assert not bundle.expects_explanations
    assert DOC.text in bundle.messages[-1].content


def test_zero_shot_system_demands_coded_text_only():
    bundle = build_zero_shot(DOC, SYSTEM)
    assert "Return only the coded text" in bundle.messages[0].content


def test_few_shot_shape(pool):
    examples = sample_examples(pool, 4, Ratio.EVEN, seed=1)
    bundle = build_few_shot(DOC, examples, SYSTEM, Ratio.EVEN)
    assert len(bundle.messages) == 10  # 1 + 4 * 2 + 1
    roles = [m.role for m in bundle.messages]
    assert roles[0] is Role.SYSTEM and roles[-1] is Role.USER
    for i, role in enumerate(roles[1:-1]):
        assert role is (Role.USER if i % 2 == 0 else Role.ASSISTANT)


def test_few_shot_assistant_contents_reparse(pool):
    examples = sample_examples(pool, 4, Ratio.EVEN, seed=1)
    bundle = build_few_shot(DOC, examples, SYSTEM, Ratio.EVEN)
    for message in bundle.messages[1:-1]:
        if message.role is Role.ASSISTANT:
            parsed = parse_inline(message.content)
            assert parsed.spans


def test_few_shot_records_example_refs(pool):
    examples = sample_examples(pool, 4, Ratio.EVEN, seed=1)
    bundle = build_few_shot(DOC, examples, SYSTEM, Ratio.EVEN)
    assert len(bundle.example_refs) == 4
    assert {ref[0] for ref in bundle.example_refs} <= {
        "arcadia", "bellweather", "cormorant", "driftwood", "ember",
    }


def test_cot_assistant_has_one_template_per_span(corpus, pool, corpus_dir):
    meanings = load_span_meanings(corpus_dir)
    examples = sample_examples(pool, 4, Ratio.EVEN, seed=3)
    explained = explain_examples(examples, corpus, meanings)
    bundle = build_cot(DOC, explained, SYSTEM_COT, Ratio.EVEN)
    assert bundle.expects_explanations
    needle = "has a more basic contemporary meaning"
    for explained_example, message in zip(explained, bundle.messages[2:-1:2]):
        assert message.role is Role.ASSISTANT
        assert message.content.count(needle) == len(explained_example.example.sentence.spans)


def test_cot_final_user_instructs_sentinels(corpus, pool, corpus_dir):
    meanings = load_span_meanings(corpus_dir)
    explained = explain_examples(sample_examples(pool, 4, Ratio.EVEN, seed=3), corpus, meanings)
    bundle = build_cot(DOC, explained, SYSTEM_COT, Ratio.EVEN)
    final = bundle.messages[-1].content
    assert BEGIN_SENTINEL in final and END_SENTINEL in final
    # sentinels appear nowhere else
    for message in bundle.messages[:-1]:
        assert BEGIN_SENTINEL not in message.content
        assert END_SENTINEL not in message.content


def test_sentinels_absent_from_other_strategies(pool):
    for bundle in (
        build_zero_shot(DOC, SYSTEM),
        build_few_shot(DOC, sample_examples(pool, 4, Ratio.EVEN, seed=1), SYSTEM),
    ):
        for message in bundle.messages:
            assert BEGIN_SENTINEL not in message.content


def test_rag_full_injects_codebook(data_dir):
    codebook = load_codebook(data_dir / "codebook.md")
    bundle = build_rag(DOC, codebook, RagMode.FULL, k=2, system_prompt=SYSTEM_RAG)
    assert codebook.body in bundle.messages[0].content
    assert [m.role for m in bundle.messages] == [Role.SYSTEM, Role.USER]


def test_rag_retrieved_all_chunks_equals_full_up_to_order(data_dir):
    codebook = load_codebook(data_dir / "codebook.md")
    full = build_rag(DOC, codebook, RagMode.FULL, k=1, system_prompt=SYSTEM_RAG)
    retrieved = build_rag(
        DOC, codebook, RagMode.RETRIEVED, k=len(codebook.chunks), system_prompt=SYSTEM_RAG
    )
    for _, chunk_text in codebook.chunks:
        assert chunk_text in retrieved.messages[0].content
    assert len(retrieved.messages[0].content) == len(full.messages[0].content)


def test_determinism(pool):
    examples = sample_examples(pool, 4, Ratio.EVEN, seed=1)
    a = build_few_shot(DOC, examples, SYSTEM, Ratio.EVEN)
    b = build_few_shot(DOC, sample_examples(pool, 4, Ratio.EVEN, seed=1), SYSTEM, Ratio.EVEN)
    assert a == b


def test_bundle_shape_validation():
    with pytest.raises(BundleShapeError):
        PromptBundle(
            messages=(Message(Role.USER, "x"), Message(Role.USER, "y")),
            strategy=Strategy.ZERO_SHOT,
            n_examples=0,
            ratio=Ratio.NA,
            doc_id="d",
            expects_explanations=False,
        )
    with pytest.raises(BundleShapeError):
        PromptBundle(
            messages=(Message(Role.SYSTEM, "s"), Message(Role.USER, "u")),
            strategy=Strategy.ZERO_SHOT,
            n_examples=0,
            ratio=Ratio.NA,
            doc_id="d",
            expects_explanations=True,  # reserved for cot
        )


def test_explanation_template_constant_shape():
    assert EXPLANATION_TEMPLATE.count("{basic}") == 2
    assert EXPLANATION_TEMPLATE.count("{word}") == 1
    assert EXPLANATION_TEMPLATE.count("{figurative}") == 1


def test_prompt_assets_overridable_by_directory(tmp_path):
    from metatag.promptgen import UnknownPromptAsset

    (tmp_path / "system_tagging.txt").write_text("Custom system prompt.\n", encoding="utf-8")
    assert load_system_prompt("system_tagging", tmp_path) == "Custom system prompt."
    with pytest.raises(UnknownPromptAsset):
        load_system_prompt("nonexistent", tmp_path)
    with pytest.raises(UnknownPromptAsset):
        load_system_prompt("nonexistent")
    # packaged default still available without a directory
    assert "metaphorical expression" in load_system_prompt("system_tagging")
