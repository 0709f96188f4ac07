"""Built-in prompt templates.

These ship as defaults and are copied into the user's ``prompts/`` directory
on first run, where they can be freely edited. Each template is a plain text
file named ``<template_id>.txt``; placeholders use ``{name}`` syntax. The
expected output shape of each template is fixed by the pipeline that uses it,
not by the file.
"""

from __future__ import annotations

from pathlib import Path

# template_id -> (expects, body)
DEFAULT_TEMPLATES: dict[str, tuple[str, str]] = {
    "suggest_related": (
        "json_array",
        """You are a vocabulary tutor helping a language learner grow their \
vocabulary.

The learner is studying the word "{word}" (language: {language}).
Suggest up to {max_candidates} related words. Related words may be synonyms, \
antonyms, words with similar spelling, words sharing a root, or words of a \
similar difficulty level. Only suggest words in these languages: \
{target_languages}.

Respond with ONLY a JSON array. Each element must be an object with keys:
  "word": the suggested word,
  "language": its language code,
  "relation": a short relation name (e.g. "synonym", "antonym", "cognate"),
  "gloss": a one-line meaning in English.
Do not include the word "{word}" itself.
""",
    ),
    "suggest_crosslingual": (
        "json_array",
        """You are a vocabulary tutor for a polyglot learner.

The learner knows the word "{word}" (language: {language}). Suggest up to \
{max_candidates} related words from OTHER languages, preferring cognates, \
loanwords, and words with shared roots. Only suggest words in these \
languages: {target_languages}.

Respond with ONLY a JSON array of objects with keys "word", "language", \
"relation", and "gloss" (one-line meaning in English).
""",
    ),
    "filter_safe": (
        "json_array",
        """You are a content safety filter for a language learning app that may \
be used by children.

Here is a JSON array of candidate vocabulary words:
{candidates}

Return ONLY a JSON array containing the words from the list above that are \
appropriate for all audiences, in the same order. Remove profanity, slurs, \
sexual content, and violent content. If every word is appropriate, return \
the full list unchanged.
""",
    ),
    "gen_mcq": (
        "json_array",
        """You are generating a vocabulary quiz.

For each of the following words, write one multiple-choice question that \
tests whether the learner knows the word. Words (JSON): {words}

Respond with ONLY a JSON array. For each word emit one object:
  "type": "mcq",
  "target_word": the word being tested,
  "question": the question text,
  "options": exactly 4 distinct answer options,
  "answer": the correct option (must be one of "options").
Questions should be answerable from vocabulary knowledge alone.
""",
    ),
    "gen_fib": (
        "json_array",
        """You are generating a vocabulary quiz.

For each of the following words, write one fill-in-the-blank question whose \
answer is the word itself. Words (JSON): {words}

Respond with ONLY a JSON array. For each word emit one object:
  "type": "fib",
  "target_word": the word being tested,
  "question": a sentence in the word's language containing exactly one blank \
written as "____" where the word fits,
  "answer": the word that fills the blank.
The sentence must make the intended word unambiguous.
""",
    ),
    "describe_word": (
        "free_text",
        """Write a short dictionary-style description of the word "{word}" \
(language: {language}) for a language learner: its meaning, part of speech, \
and one example sentence. Answer in plain text, at most three sentences.
""",
    ),
    "judge_qa": (
        "json_object",
        """You are judging the quality of an automatically generated vocabulary \
quiz question.

Question type: {kind}
Question: {question}
Options: {options}
Stated correct answer: {answer}

Decide whether the question-answer pair is correct: the question must be \
unambiguous, answerable, and the stated answer must be the right one.

Respond with ONLY a JSON object: {{"verdict": "correct" or "incorrect", \
"rationale": one short sentence}}.
""",
    ),
}


def template_expects(template_id: str) -> str:
    if template_id in DEFAULT_TEMPLATES:
        return DEFAULT_TEMPLATES[template_id][0]
    return "free_text"


def ensure_prompt_files(prompts_dir: str | Path) -> Path:
    """Seed a prompts directory with any missing default templates."""
    prompts_dir = Path(prompts_dir)
    prompts_dir.mkdir(parents=True, exist_ok=True)
    for template_id, (_, body) in DEFAULT_TEMPLATES.items():
        path = prompts_dir / f"{template_id}.txt"
        if not path.exists():
            path.write_text(body, encoding="utf-8")
    return prompts_dir
