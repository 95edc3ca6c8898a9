import json
import os
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv
from rich.console import Console

load_dotenv()

console = Console(stderr=True)

CONFIG_DIR = Path.home() / ".pencil_rpd"
CONFIG_FILE = CONFIG_DIR / "config.json"

DEFAULTS = {
    "PENCIL_EPS": "1e-6",
    "PENCIL_MODE": "practical",
    "PENCIL_CUTOFF": "1",
    "PENCIL_OUT": "results",
}


def load_config_file() -> dict:
    """Load the JSON configuration file, returning an empty dict when absent"""
    if not CONFIG_FILE.exists():
        return {}
    try:
        with open(CONFIG_FILE) as f:
            data = json.load(f)
        if isinstance(data, dict):
            return data
        console.print("[yellow]Warning: config file is not a JSON object, ignoring it[/]")
    except Exception as e:
        console.print(f"[yellow]Warning: Error reading config file: {e}[/]")
    return {}


def save_config_file(config_data: dict) -> Path:
    CONFIG_FILE.parent.mkdir(parents=True, exist_ok=True)
    with open(CONFIG_FILE, "w") as f:
        json.dump(config_data, f, indent=2)
    return CONFIG_FILE


def get_config_value(key: str) -> Optional[str]:
    """Get configuration value with fallback to environment variables"""
    config_data = load_config_file()
    if key in config_data and config_data[key] not in (None, ""):
        return str(config_data[key])

    value = os.getenv(key)
    if value not in (None, ""):
        return value
    return DEFAULTS.get(key)


def get_thread_cap() -> int:
    default = min(8, os.cpu_count() or 1)
    raw = get_config_value("PENCIL_THREADS")
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        console.print(
            f"[yellow]Warning: PENCIL_THREADS={raw!r} is not an integer, using {default}[/]"
        )
        return default
    if value < 1:
        console.print(f"[yellow]Warning: PENCIL_THREADS must be >= 1, using {default}[/]")
        return default
    return value


def get_default_eps() -> float:
    try:
        return float(get_config_value("PENCIL_EPS"))
    except (TypeError, ValueError):
        return float(DEFAULTS["PENCIL_EPS"])


def get_default_mode() -> str:
    mode = get_config_value("PENCIL_MODE")
    return mode if mode in ("practical", "theoretical") else DEFAULTS["PENCIL_MODE"]


def get_default_cutoff() -> int:
    try:
        return max(1, int(get_config_value("PENCIL_CUTOFF")))
    except (TypeError, ValueError):
        return int(DEFAULTS["PENCIL_CUTOFF"])


def get_output_dir() -> Path:
    return Path(get_config_value("PENCIL_OUT"))
