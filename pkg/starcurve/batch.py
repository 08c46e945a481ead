# -*- coding: utf-8 -*-
"""Пакетные отчёты: уровни раздаются рабочим потокам через очередь, порядок ответа - как на входе."""

from __future__ import annotations

import queue
import threading
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from loguru import logger

from .catalog import GoldenRow
from .config import get_settings
from .report import LevelRow, level_report

Worker = Callable[[int], LevelRow]


def _work(inq: queue.Queue, results: Dict[int, LevelRow], errors: List[Tuple[int, int, BaseException]],
          fn: Worker, stop_event: threading.Event, lock: threading.Lock):
    while not stop_event.is_set():
        try:
            idx, N = inq.get_nowait()
        except queue.Empty:
            return
        try:
            row = fn(N)
        except Exception as e:
            logger.error("уровень {}: {}", N, e)
            with lock:
                errors.append((idx, N, e))
            stop_event.set()
            return
        with lock:
            results[idx] = row


def run_levels(
    levels: Sequence[int],
    jobs: Optional[int] = None,
    golden: Optional[Dict[int, GoldenRow]] = None,
    fn: Optional[Worker] = None,
) -> List[LevelRow]:
    """level_report по всем уровням в jobs потоках; первая ошибка останавливает остальных и пробрасывается."""
    jobs = jobs or get_settings().jobs
    golden = golden or {}
    if fn is None:
        def fn(N: int) -> LevelRow:
            return level_report(N, golden.get(N))

    inq: queue.Queue = queue.Queue()
    for idx, N in enumerate(levels):
        inq.put((idx, N))
    results: Dict[int, LevelRow] = {}
    errors: List[Tuple[int, int, BaseException]] = []
    stop_event = threading.Event()
    lock = threading.Lock()

    threads = []
    for _ in range(max(1, min(jobs, len(levels)))):
        th = threading.Thread(target=_work, args=(inq, results, errors, fn, stop_event, lock), daemon=True)
        th.start()
        threads.append(th)
    for th in threads:
        th.join()

    if errors:
        _, _, exc = min(errors, key=lambda t: t[0])
        raise exc
    logger.debug("пакет: {} уровней, потоков {}", len(levels), len(threads))
    return [results[i] for i in range(len(levels))]
