use std::io::{BufRead, BufReader, Read, Write};
use std::net::{TcpListener, TcpStream};
use std::sync::mpsc;
use std::thread;
use std::time::Duration;

use qaga_core::{IsingModel, RemoteSampler, Sampler, SamplerError};

/// Serves exactly one request, replying with `status` and `body`; the request
/// body is sent back over the returned channel.
fn serve_once(status: u16, body: String, delay: Duration) -> (String, mpsc::Receiver<String>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}/sample", listener.local_addr().unwrap());
    let (tx, rx) = mpsc::channel();
    thread::spawn(move || {
        let (stream, _) = listener.accept().unwrap();
        let request = read_request(&stream);
        let _ = tx.send(request);
        thread::sleep(delay);
        let mut stream = stream;
        let _ = write!(
            stream,
            "HTTP/1.1 {status} X\r\ncontent-type: application/json\r\ncontent-length: {}\r\nconnection: close\r\n\r\n{body}",
            body.len()
        );
    });
    (url, rx)
}

fn read_request(stream: &TcpStream) -> String {
    let mut reader = BufReader::new(stream);
    let mut length = 0;
    loop {
        let mut line = String::new();
        reader.read_line(&mut line).unwrap();
        let line = line.trim_end();
        if line.is_empty() {
            break;
        }
        if let Some((name, value)) = line.split_once(':') {
            if name.eq_ignore_ascii_case("content-length") {
                length = value.trim().parse().unwrap();
            }
        }
    }
    let mut body = vec![0; length];
    reader.read_exact(&mut body).unwrap();
    String::from_utf8(body).unwrap()
}

fn pair() -> IsingModel {
    IsingModel::from_parts([(1, -2.0), (2, 0.0)], [((1, 2), 1.0)]).unwrap()
}

fn client(url: String) -> RemoteSampler {
    RemoteSampler::new(url, Duration::from_secs(5))
}

#[test]
fn fixed_response_is_parsed_and_rescored() {
    // Claimed energies are wrong on purpose; they must be recomputed.
    let body = r#"{"samples": [
        {"assignment": {"1": 1, "2": -1}, "energy": 100.0},
        {"assignment": {"1": -1, "2": -1}}
    ]}"#;
    let (url, request) = serve_once(200, body.into(), Duration::ZERO);
    let set = client(url).sample(&pair(), 2, 42).unwrap();
    let energies: Vec<f64> = set.iter().map(|s| s.energy().unwrap()).collect();
    assert_eq!(energies, vec![-3.0, 3.0]);

    let sent: serde_json::Value = serde_json::from_str(&request.recv().unwrap()).unwrap();
    assert_eq!(sent["num_reads"], 2);
    assert_eq!(sent["seed"], 42);
    assert_eq!(sent["num_vars"], 2);
    assert_eq!(sent["h"]["1"], -2.0);
    assert_eq!(sent["J"]["1,2"], 1.0);
}

#[test]
fn missing_variable_is_a_domain_mismatch() {
    let body = r#"{"samples": [{"assignment": {"1": 1}}]}"#;
    let (url, _rx) = serve_once(200, body.into(), Duration::ZERO);
    let err = client(url).sample(&pair(), 1, 0).unwrap_err();
    assert!(
        matches!(err, SamplerError::DomainMismatch { .. }),
        "{err:?}"
    );
    assert_eq!(err.payload(), Some(body));
}

#[test]
fn wrong_read_count_and_garbage_are_malformed() {
    let body = r#"{"samples": [{"assignment": {"1": 1, "2": 1}}]}"#;
    let (url, _rx) = serve_once(200, body.into(), Duration::ZERO);
    let err = client(url).sample(&pair(), 3, 0).unwrap_err();
    assert!(
        matches!(err, SamplerError::MalformedResponse { .. }),
        "{err:?}"
    );

    let (url, _rx) = serve_once(200, "not json".into(), Duration::ZERO);
    let err = client(url).sample(&pair(), 1, 0).unwrap_err();
    assert!(
        matches!(err, SamplerError::MalformedResponse { .. }),
        "{err:?}"
    );
    assert_eq!(err.payload(), Some("not json"));

    let body = r#"{"samples": [{"assignment": {"1": 2, "2": 1}}]}"#;
    let (url, _rx) = serve_once(200, body.into(), Duration::ZERO);
    let err = client(url).sample(&pair(), 1, 0).unwrap_err();
    assert!(
        matches!(err, SamplerError::MalformedResponse { .. }),
        "{err:?}"
    );
}

#[test]
fn http_error_keeps_the_payload() {
    let (url, _rx) = serve_once(503, r#"{"error":"busy"}"#.into(), Duration::ZERO);
    let err = client(url).sample(&pair(), 1, 0).unwrap_err();
    match &err {
        SamplerError::HttpStatus { status, payload } => {
            assert_eq!(*status, 503);
            assert!(payload.contains("busy"));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn unreachable_endpoint_is_a_transport_error() {
    // Bind then drop to get a port with nothing listening.
    let port = TcpListener::bind("127.0.0.1:0")
        .unwrap()
        .local_addr()
        .unwrap()
        .port();
    let err = client(format!("http://127.0.0.1:{port}/"))
        .sample(&pair(), 1, 0)
        .unwrap_err();
    assert!(matches!(err, SamplerError::Transport { .. }), "{err:?}");
    assert!(err.to_string().contains(&port.to_string()));
}

#[test]
fn slow_endpoint_times_out() {
    let body = r#"{"samples": [{"assignment": {"1": 1, "2": 1}}]}"#;
    let (url, _rx) = serve_once(200, body.into(), Duration::from_secs(3));
    let sampler = RemoteSampler::new(url, Duration::from_millis(300));
    let err = sampler.sample(&pair(), 1, 0).unwrap_err();
    assert!(matches!(err, SamplerError::Timeout { .. }), "{err:?}");
}

#[test]
fn zero_reads_never_hits_the_network() {
    let err = client("http://127.0.0.1:9/".into())
        .sample(&pair(), 0, 0)
        .unwrap_err();
    assert!(matches!(err, SamplerError::ZeroReads));
}
