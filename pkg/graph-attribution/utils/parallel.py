"""
Execução paralela com ordem de saída determinística.

Os workers são threads (numpy libera o GIL nas operações pesadas);
o resultado segue sempre a ordem de entrada, então qualquer redução
feita pelo chamador independe do número de threads.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def resolve_threads(threads: int) -> int:
    """0 ou negativo = núcleos disponíveis."""
    if threads and threads > 0:
        return threads
    return os.cpu_count() or 1


def parallel_map(fn: Callable[[T], R], items: Iterable[T], threads: int = 0) -> List[R]:
    """Aplica fn a cada item; resultados na ordem de entrada.

    threads <= 1 (após resolução) roda inline, sem executor.
    Exceções do worker são propagadas para o chamador.
    """
    items = list(items)
    workers = min(resolve_threads(threads), max(len(items), 1))
    if workers <= 1:
        return [fn(item) for item in items]

    with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="ga-worker") as pool:
        return list(pool.map(fn, items))
