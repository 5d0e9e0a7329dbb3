from configparser import ConfigParser
from pathlib import Path
from typing import TypedDict
import os

CONFIG_PATH = Path.home() / ".confalg" / "confalg.ini"
#: Environment variable that caps the number of worker threads
THREADS_ENV = "CONFALG_THREADS"

class Defaults(TypedDict, total=False):
    #: Highest exponent checked for ℕ-indexed families
    window: int
    #: Truncation order of formal deformations
    order: int
    #: Report format, `text` or `json`
    report: str
    threads: int

def get_defaults() -> Defaults:
    defaults: Defaults = {}
    if CONFIG_PATH.exists():
        parser = ConfigParser()
        parser.read(CONFIG_PATH)
        if parser.has_option("check", "window"):
            defaults["window"] = parser.getint("check", "window")
        if parser.has_option("check", "order"):
            defaults["order"] = parser.getint("check", "order")
        if parser.has_option("output", "report"):
            defaults["report"] = parser.get("output", "report")
        if parser.has_option("output", "threads"):
            defaults["threads"] = parser.getint("output", "threads")

    return defaults

def thread_count() -> int:
    """
    Number of worker threads for basis-tuple loops: `CONFALG_THREADS` if set, then the config file, then 1
    """
    env = os.environ.get(THREADS_ENV)
    if env is not None and env.strip().isdigit():
        return max(1, int(env))
    return max(1, get_defaults().get("threads", 1))
