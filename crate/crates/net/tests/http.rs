use std::sync::Arc;
use std::time::Duration;

use mobidesc_core::wire::{Handler, Loopback, Method, Request, Response, Transport, TransportError, JSON};
use mobidesc_net::{HttpTransport, Server};

/// Echoes the request back as JSON-ish text.
struct Echo;

impl Handler for Echo {
    fn handle(&self, req: &Request) -> Response {
        let query: Vec<String> = req.query.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let body = format!(
            "{} {} [{}] {}",
            req.method.as_str(),
            req.path,
            query.join(","),
            String::from_utf8_lossy(&req.body)
        );
        match req.path.as_str() {
            "/missing" => Response::new(404, "text/plain", "nope"),
            "/empty" => Response::empty(204),
            _ => Response::new(200, JSON, body),
        }
    }
}

fn transport() -> HttpTransport {
    HttpTransport::new(Duration::from_secs(5)).unwrap()
}

#[test]
fn requests_round_trip_over_http() {
    let server = Server::spawn("127.0.0.1:0".parse().unwrap(), Arc::new(Echo)).unwrap();
    let base = server.base_url();
    let http = transport();

    let r = http
        .send(
            Method::Get,
            &format!("{base}/find?name=Sales%20man&op=getLocation"),
            Vec::new(),
        )
        .unwrap();
    assert_eq!(r.status, 200);
    assert_eq!(r.content_type, Some(JSON));
    assert_eq!(
        String::from_utf8(r.body).unwrap(),
        "GET /find [name=Sales man,op=getLocation] "
    );

    let r = http
        .send(Method::Post, &format!("{base}/publish"), "déjà <vu>".into())
        .unwrap();
    assert_eq!(String::from_utf8(r.body).unwrap(), "POST /publish [] déjà <vu>");

    let r = http
        .send(Method::Delete, &format!("{base}/missing"), Vec::new())
        .unwrap();
    assert_eq!(
        (r.status, r.content_type, r.body.as_slice()),
        (404, Some("text/plain"), b"nope".as_slice())
    );
    let r = http.send(Method::Get, &format!("{base}/empty"), Vec::new()).unwrap();
    assert_eq!((r.status, r.content_type, r.body.len()), (204, None, 0));
    server.shutdown().unwrap();
}

#[test]
fn http_and_loopback_agree() {
    let server = Server::spawn("127.0.0.1:0".parse().unwrap(), Arc::new(Echo)).unwrap();
    let loopback = Loopback::new();
    loopback.register("http://echo.local", Arc::new(Echo)).unwrap();
    let http = transport();
    for (method, path, body) in [
        (Method::Get, "/desc/contextual", ""),
        (Method::Post, "/consume", r#"{"consumerId":"c1"}"#),
        (Method::Get, "/find?limit=3", ""),
    ] {
        let over_http = http
            .send(method, &format!("{}{path}", server.base_url()), body.into())
            .unwrap();
        let in_process = loopback
            .send(method, &format!("http://echo.local{path}"), body.into())
            .unwrap();
        assert_eq!(over_http, in_process);
    }
}

#[test]
fn transport_errors() {
    let server = Server::spawn("127.0.0.1:0".parse().unwrap(), Arc::new(Echo)).unwrap();
    let dead = server.base_url();
    server.shutdown().unwrap();
    let http = transport();
    assert!(matches!(
        http.send(Method::Get, &format!("{dead}/x"), Vec::new()),
        Err(TransportError::Unreachable(_))
    ));
    assert!(matches!(
        http.send(Method::Get, "not a url", Vec::new()),
        Err(TransportError::BadUrl(_))
    ));
}
