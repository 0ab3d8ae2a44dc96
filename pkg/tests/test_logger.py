import json
import logging

import pytest

from logger.logger import MyJSONFormatter, setup_logging

def _record(**extra) -> logging.LogRecord:
    record = logging.LogRecord("experiments.curves", logging.INFO, __file__, 10,
                               "%s q=%.3g pass", ("m1-curve", 0.5), None)
    record.__dict__.update(extra)
    return record

def test_json_formatter_carries_extras():
    formatter = MyJSONFormatter(fmt_keys={"level": "levelname", "message": "message",
                                          "logger": "name"})
    line = json.loads(formatter.format(_record(experiment="m1-curve", q=0.5, n=1000,
                                               replicates=10_000, seed=7, passed=True)))
    assert line["level"] == "INFO"
    assert line["message"] == "m1-curve q=0.5 pass"
    assert line["logger"] == "experiments.curves"
    assert (line["q"], line["n"], line["replicates"], line["seed"]) == (0.5, 1000, 10_000, 7)
    assert line["passed"] is True
    assert "timestamp" in line

def test_json_formatter_without_keys():
    line = json.loads(MyJSONFormatter().format(_record()))
    assert line["message"] == "m1-curve q=0.5 pass"

def test_setup_logging_missing_file(tmp_path):
    with pytest.raises(SystemExit) as exit_info:
        setup_logging(tmp_path.joinpath("absent.json"))
    assert exit_info.value.code == 2

def test_setup_logging_bad_json(tmp_path):
    config = tmp_path.joinpath("bad.json")
    config.write_text("{not json", encoding="utf-8")
    with pytest.raises(SystemExit) as exit_info:
        setup_logging(config)
    assert exit_info.value.code == 2

def test_setup_logging_creates_log_folder(tmp_path, reset_logging):
    folder = tmp_path.joinpath("logs", "nested")
    config = tmp_path.joinpath("logging.json")
    config.write_text(json.dumps({
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {"json": {"()": "logger.logger.MyJSONFormatter",
                                "fmt_keys": {"level": "levelname", "message": "message"}}},
        "handlers": {"jsonl": {"class": "logging.FileHandler", "formatter": "json",
                               "filename": str(folder.joinpath("run.jsonl"))}},
        "loggers": {"experiments": {"level": "INFO", "handlers": ["jsonl"]}},
    }), encoding="utf-8")
    assert setup_logging(config) == folder
    logging.getLogger("experiments.curves").info("verdict", extra={"q": 0.25})
    for handler in logging.getLogger("experiments").handlers:
        handler.flush()
    line = json.loads(folder.joinpath("run.jsonl").read_text(encoding="utf-8").splitlines()[-1])
    assert line == {"level": "INFO", "message": "verdict", "timestamp": line["timestamp"], "q": 0.25}
