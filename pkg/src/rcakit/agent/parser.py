"""Parsing of planner completions into actions or final answers.

The reply grammar (leading/trailing whitespace ignored):

    Thought: <reasoning>
    Action: <tool name>
    Action Input: <input>

or, to finish the episode:

    Thought: <reasoning>
    Final Answer: <answer>

Anything the model wrote after a self-invented "Observation:" label is
discarded before parsing. Text that fits neither form is a parse failure;
the loop turns that into a reminder observation rather than an error.
"""

from __future__ import annotations

from dataclasses import dataclass

_THOUGHT_LABEL = "Thought:"
_ACTION_LABEL = "\nAction:"
_INPUT_LABEL = "Action Input:"
_FINAL_LABEL = "\nFinal Answer:"
_OBSERVATION_LABEL = "\nObservation:"


@dataclass(frozen=True)
class ParsedAction:
    thought: str
    action: str
    action_input: str


@dataclass(frozen=True)
class ParsedFinal:
    thought: str
    answer: str


@dataclass(frozen=True)
class ParseFailure:
    raw: str


def parse_step(completion: str) -> ParsedAction | ParsedFinal | ParseFailure:
    text = completion.strip()
    if _OBSERVATION_LABEL in text:
        text = text.split(_OBSERVATION_LABEL, 1)[0].rstrip()
    if not text.startswith(_THOUGHT_LABEL):
        return ParseFailure(raw=completion)
    rest = text[len(_THOUGHT_LABEL):]

    final_at = rest.find(_FINAL_LABEL)
    action_at = rest.find(_ACTION_LABEL)
    if final_at != -1 and (action_at == -1 or final_at < action_at):
        return ParsedFinal(
            thought=rest[:final_at].strip(),
            answer=rest[final_at + len(_FINAL_LABEL):].strip(),
        )
    if action_at == -1:
        return ParseFailure(raw=completion)

    thought = rest[:action_at].strip()
    after = rest[action_at + len(_ACTION_LABEL):]
    action_line, _, remainder = after.partition("\n")
    action = action_line.strip()
    remainder = remainder.strip()
    if not action or not remainder.startswith(_INPUT_LABEL):
        return ParseFailure(raw=completion)
    action_input = remainder[len(_INPUT_LABEL):].strip()
    return ParsedAction(thought=thought, action=action, action_input=action_input)
