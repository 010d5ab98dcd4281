"""Ordering, priority and preemption for announcements bound for a speech backend.

Earcons never wait behind speech: they are emitted the moment they are
enqueued. Speech plays one utterance at a time; an interrupting utterance
cancels whatever is in flight, drops queued entries at or below its own
priority, and plays next. The engine does not model speech duration; the
backend reports completion (tests complete immediately after poll).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable

from .controller import Announcement, Earcon, Priority, Speak

_PRIORITY_RANK = {Priority.DETAIL: 0, Priority.INFO: 1, Priority.ALERT: 2}

# (t_ms, payload) for every emission, in emission order.
EmitCallback = Callable[[int, Announcement], None]


@dataclass(frozen=True)
class Utterance:
    seq: int
    payload: Speak
    enqueued_at_ms: int


@dataclass
class SpeechQueue:
    """Single-owner announcement queue with a capture transcript.

    The transcript records what was actually voiced, one line per
    emission: ``t_ms<TAB>kind<TAB>text``. Cancelled utterances never
    appear in it.
    """

    on_emit: EmitCallback | None = None
    pending: deque[Utterance] = field(default_factory=deque)
    current: Utterance | None = None
    transcript: list[str] = field(default_factory=list)
    _seq: int = 0

    def enqueue(self, a: Announcement, now_ms: int) -> None:
        if isinstance(a, Earcon):
            self._emit(now_ms, "earcon", a.kind.value, a)
            return
        self._seq += 1
        utterance = Utterance(self._seq, a, now_ms)
        if a.interrupt:
            self.current = None  # cancelled; never completes, never reappears
            rank = _PRIORITY_RANK[a.priority]
            self.pending = deque(
                u for u in self.pending if _PRIORITY_RANK[u.payload.priority] > rank
            )
            self.pending.appendleft(utterance)
        else:
            self.pending.append(utterance)

    def poll(self, now_ms: int) -> Utterance | None:
        """Next utterance to vocalize, marked in-flight; None while busy or idle."""
        if self.current is not None or not self.pending:
            return None
        self.current = self.pending.popleft()
        self._emit(now_ms, "speak", self.current.payload.text, self.current.payload)
        return self.current

    def complete(self) -> None:
        """Backend reports the in-flight utterance finished."""
        self.current = None

    @property
    def idle(self) -> bool:
        return self.current is None and not self.pending

    def _emit(self, t_ms: int, kind: str, text: str, payload: Announcement) -> None:
        self.transcript.append(f"{t_ms}\t{kind}\t{text}")
        if self.on_emit is not None:
            self.on_emit(t_ms, payload)


def drain(queue: SpeechQueue, now_ms: int) -> list[Speak]:
    """Play everything queued with zero-duration completions; in order."""
    spoken = []
    while True:
        utterance = queue.poll(now_ms)
        if utterance is None:
            return spoken
        spoken.append(utterance.payload)
        queue.complete()
