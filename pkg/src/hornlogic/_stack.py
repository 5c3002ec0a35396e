"""Run deeply recursive work on a thread with a large stack.

CPython 3.10 spends C stack on every nested generator resume, so deep
resolution can crash the interpreter on the main thread's 8 MiB stack.
"""

import sys
import threading

_lock = threading.Lock()
_local = threading.local()

FRAMES_PER_LEVEL = 4
BYTES_PER_LEVEL = 16 * 1024
MIN_STACK = 64 * 1024 * 1024
MAX_STACK = 2 * 1024 * 1024 * 1024 - 4096


def _raise_recursion_limit(frames: int):
    with _lock:
        if sys.getrecursionlimit() < frames:
            sys.setrecursionlimit(frames)


def call_with_depth(depth: int, fn, *args, **kwargs):
    """Call ``fn`` where ``depth`` levels of resolution fit on the stack."""
    _raise_recursion_limit(depth * FRAMES_PER_LEVEL + 2000)
    needed = min(max(MIN_STACK, depth * BYTES_PER_LEVEL), MAX_STACK)
    if getattr(_local, "stack", 0) >= needed:
        return fn(*args, **kwargs)

    outcome = {}

    def target():
        _local.stack = needed
        try:
            outcome["value"] = fn(*args, **kwargs)
        except BaseException as exc:  # re-raised on the caller's thread
            outcome["error"] = exc

    with _lock:
        old = threading.stack_size()
        threading.stack_size(needed)
        try:
            # the size is read when the OS thread is created, i.e. at start()
            worker = threading.Thread(target=target, name="hornlogic-deep", daemon=True)
            worker.start()
        finally:
            threading.stack_size(old)
    worker.join()
    if "error" in outcome:
        raise outcome["error"]
    return outcome.get("value")
