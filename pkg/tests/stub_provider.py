"""Minimal scripted provider server for client tests: chat completions plus
the fine-tuning file/job endpoints, with per-test scripting hooks."""

from __future__ import annotations

import json
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer


class StubProvider:
    def __init__(self):
        self.chat_statuses: list[int] = []  # consumed per request; empty -> 200
        self.content_fn = None  # payload -> str; default echoes last user message
        self.delay_s = 0.0
        self.reject_upload = False
        self.polls_until_done = 0
        self.final_status = "succeeded"
        self.requests: list[dict] = []
        self.chat_calls = 0
        self.ft_polls = 0
        self.max_concurrent = 0
        self._in_flight = 0
        self._lock = threading.Lock()
        self._server: ThreadingHTTPServer | None = None

    @property
    def base_url(self) -> str:
        host, port = self._server.server_address
        return f"http://{host}:{port}"

    def start(self) -> "StubProvider":
        stub = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, *args):
                pass

            def _reply(self, status: int, body: dict):
                data = json.dumps(body).encode("utf-8")
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(data)))
                self.end_headers()
                self.wfile.write(data)

            def _read_body(self) -> bytes:
                length = int(self.headers.get("Content-Length", 0))
                return self.rfile.read(length)

            def do_POST(self):
                body = self._read_body()
                if self.path.endswith("/chat/completions"):
                    payload = json.loads(body)
                    with stub._lock:
                        stub.chat_calls += 1
                        stub._in_flight += 1
                        stub.max_concurrent = max(stub.max_concurrent, stub._in_flight)
                        stub.requests.append(payload)
                        status = stub.chat_statuses.pop(0) if stub.chat_statuses else 200
                    try:
                        if stub.delay_s:
                            time.sleep(stub.delay_s)
                        if status != 200:
                            self._reply(status, {"error": f"scripted {status}"})
                            return
                        if stub.content_fn is not None:
                            content = stub.content_fn(payload)
                        else:
                            content = payload["messages"][-1]["content"]
                        self._reply(200, {
                            "choices": [
                                {"message": {"content": content}, "finish_reason": "stop"}
                            ],
                            "usage": {"prompt_tokens": 7, "completion_tokens": 11},
                        })
                    finally:
                        with stub._lock:
                            stub._in_flight -= 1
                elif self.path.endswith("/files"):
                    if stub.reject_upload:
                        self._reply(400, {"error": "scripted upload rejection: bad record"})
                    else:
                        self._reply(200, {"id": "file-stub-1"})
                elif self.path.endswith("/fine_tuning/jobs"):
                    self._reply(200, {"id": "job-stub-1", "status": "queued"})
                else:
                    self._reply(404, {"error": f"no route {self.path}"})

            def do_GET(self):
                if "/fine_tuning/jobs/" in self.path:
                    with stub._lock:
                        stub.ft_polls += 1
                        done = stub.ft_polls > stub.polls_until_done
                    if done:
                        body = {"status": stub.final_status}
                        if stub.final_status == "succeeded":
                            body["fine_tuned_model"] = "ft:stub-model-1"
                        self._reply(200, body)
                    else:
                        self._reply(200, {"status": "running"})
                else:
                    self._reply(404, {"error": f"no route {self.path}"})

        self._server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        threading.Thread(target=self._server.serve_forever, daemon=True).start()
        return self

    def stop(self):
        if self._server is not None:
            self._server.shutdown()
            self._server.server_close()
            self._server = None
