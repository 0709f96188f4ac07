"""Scripted mock-backend builders for reproducible runs.

These feed MockBackend scripts that imitate the model's JSON output for each
pipeline: word suggestion (with a controllable fraction of repeated words),
quiz generation (with a controllable fraction of malformed questions), and
question judging. Everything is seeded and deterministic.
"""

from __future__ import annotations

import json
import random


def make_growth_script(words_per_call: int = 10, repeat_ratio: float = 0.0,
                       seed: int = 0) -> dict:
    """Suggestion script emitting pseudo-words, some previously seen.

    With ``repeat_ratio == 0`` every call returns entirely fresh words, which
    makes the vocabulary grow along its upper bound.
    """
    rng = random.Random(seed)
    emitted: dict[str, list[str]] = {}
    counters: dict[str, int] = {}

    def suggest(variables: dict) -> str:
        language = str(variables.get("language", "xx"))
        history = emitted.setdefault(language, [])
        words = []
        for _ in range(words_per_call):
            if history and rng.random() < repeat_ratio:
                word = rng.choice(history)
            else:
                counters[language] = counters.get(language, 0) + 1
                word = f"{language}w{counters[language]:06d}"
                history.append(word)
            words.append({"word": word, "language": language,
                          "relation": "related", "gloss": f"meaning of {word}"})
        return json.dumps(words, ensure_ascii=False)

    return {
        "suggest_related": suggest,
        "describe_word": "A common word. Example: it appears in many sentences.",
    }


def _valid_mcq(word: str) -> dict:
    return {
        "type": "mcq",
        "target_word": word,
        "question": f"What does \"{word}\" mean?",
        "options": [f"meaning of {word}", "a color", "a number", "a place"],
        "answer": f"meaning of {word}",
    }


def _valid_fib(word: str) -> dict:
    return {
        "type": "fib",
        "target_word": word,
        "question": f"Complete the sentence: the word ____ means \"{word}\".",
        "answer": word,
    }


def _malformed(kind: str, word: str, rng: random.Random) -> dict:
    item = _valid_mcq(word) if kind == "mcq" else _valid_fib(word)
    fault = rng.randrange(3)
    if kind == "mcq":
        if fault == 0:
            item["options"] = item["options"][:3]  # wrong option count
        elif fault == 1:
            item["answer"] = "not an option"
        else:
            item["options"][1] = item["options"][0]  # duplicate option
    else:
        if fault == 0:
            item["question"] = item["question"].replace("____", "...")  # no blank
        elif fault == 1:
            item["question"] += " ____"  # second blank
        else:
            item["answer"] = ""
    return item


def make_quiz_script(malformed_ratio: float = 0.0, seed: int = 0) -> dict:
    """Quiz-generation script; a seeded fraction of questions is broken."""
    rng = random.Random(seed)

    def gen(kind: str):
        def respond(variables: dict) -> str:
            words = json.loads(variables["words"])
            items = []
            for entry in words:
                word = entry["word"]
                if rng.random() < malformed_ratio:
                    items.append(_malformed(kind, word, rng))
                elif kind == "mcq":
                    items.append(_valid_mcq(word))
                else:
                    items.append(_valid_fib(word))
            return json.dumps(items, ensure_ascii=False)
        return respond

    return {"gen_mcq": gen("mcq"), "gen_fib": gen("fib")}


def make_judge_script(incorrect_every: int = 0) -> dict:
    """Judge script; every ``incorrect_every``-th call votes incorrect (0 = never)."""
    state = {"n": 0}

    def judge(variables: dict) -> str:
        state["n"] += 1
        incorrect = incorrect_every > 0 and state["n"] % incorrect_every == 0
        return json.dumps({
            "verdict": "incorrect" if incorrect else "correct",
            "rationale": "scripted verdict",
        })

    return {"judge_qa": judge}
