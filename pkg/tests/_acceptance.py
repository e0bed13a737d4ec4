"""Shared PASS/FAIL record for the acceptance criteria."""

import functools

RESULTS = {}


def criterion(number, title):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            RESULTS[number] = (title, "FAIL", "")
            detail = fn(*args, **kwargs)
            RESULTS[number] = (title, "PASS", detail or "")

        return run

    return wrap
