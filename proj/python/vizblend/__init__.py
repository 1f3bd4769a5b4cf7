"""Python access to the vizblend visualization engine.

Requests and responses are plain dicts with the same shape as the HTTP API.
"""

import json

from . import _core

__version__ = _core.__version__
__all__ = ["Engine", "EngineError", "Server", "run_script"]


class EngineError(Exception):
    """An engine error with its wire code, e.g. ``StaleRevision``."""

    def __init__(self, code, message):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message


def _wrap(fn, *args, **kwargs):
    try:
        return json.loads(fn(*args, **kwargs))
    except _core.EngineError as e:
        raise EngineError(*e.args) from None


class Engine:
    def __init__(self, data_dir=None):
        self._engine = _core.Engine(data_dir)

    def create_session(self, *, csv=None, dataset=None, dataset_id=None):
        if (csv is None) == (dataset is None):
            raise ValueError("pass exactly one of csv= or dataset=")
        body = {"csv": csv} if csv is not None else {"dataset": dataset}
        if dataset_id is not None:
            body["dataset_id"] = dataset_id
        return _wrap(self._engine.create_session, json.dumps(body))

    def restore_session(self, snapshot, *, csv=None):
        """Reload a snapshot. Sessions on uploaded data need the same ``csv`` back."""
        body = dict(snapshot, csv=csv) if csv is not None else snapshot
        return _wrap(self._engine.restore_session, json.dumps(body))

    def delete_session(self, session_id):
        return self._engine.delete_session(session_id)

    def get(self, session_id, resource, all=False):
        return _wrap(self._engine.get, session_id, resource, all)

    def op(self, session_id, name, expected_revision=None, **params):
        return _wrap(self._engine.op, session_id, name, json.dumps(params), expected_revision)

    def demonstrate(self, session_id, demonstration):
        return _wrap(self._engine.demonstrate, session_id, json.dumps(demonstration))

    def preview(self, rec_id):
        return _wrap(self._engine.recommendation, rec_id, "preview", None)

    def accept(self, rec_id, expected_revision=None):
        return _wrap(self._engine.recommendation, rec_id, "accept", expected_revision)

    def reject(self, rec_id):
        return _wrap(self._engine.recommendation, rec_id, "reject", None)

    def reject_all(self, session_id):
        return _wrap(self._engine.reject_all, session_id)


class Server:
    """HTTP service over an Engine, running on a background thread."""

    def __init__(self, engine, host="127.0.0.1", port=0):
        self._service = _core.Service(engine._engine)
        self._engine = engine
        self.port = self._service.start(host, port)
        self.url = f"http://{host}:{self.port}"

    def stop(self):
        self._service.stop()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.stop()


def run_script(engine, script, *, csv=None, dataset=None):
    body = {"csv": csv} if csv is not None else {"dataset": dataset or script.get("dataset")}
    return _wrap(_core.run_script, engine._engine, json.dumps(script), json.dumps(body))
