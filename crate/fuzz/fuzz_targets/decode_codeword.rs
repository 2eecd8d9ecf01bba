#![no_main]

//! Feeds arbitrary bytes to the codeword parser and decoder. Decoding must
//! never panic, and every accepted word must re-encode to itself.

use std::sync::OnceLock;

use aepcode::clustering::{cluster_atypical, ClusterModel};
use aepcode::codec::{make_layout, Codec, Codeword, DecodeOutcome};
use aepcode::typicality::partition_sequences;
use aepcode::{SourceModel, TypicalPartition};
use libfuzzer_sys::fuzz_target;

struct Instance {
    model: SourceModel,
    partition: TypicalPartition,
    clusters: ClusterModel,
}

fn instance() -> &'static Instance {
    static INSTANCE: OnceLock<Instance> = OnceLock::new();
    INSTANCE.get_or_init(|| {
        let model = SourceModel::new(&[0.2, 0.8]).unwrap();
        let partition = partition_sequences(&model, 8, 0.2).unwrap();
        let clusters = cluster_atypical(&partition, &model, 3, 0).unwrap();
        Instance {
            model,
            partition,
            clusters,
        }
    })
}

fuzz_target!(|data: &[u8]| {
    let inst = instance();
    let _ = &inst.model;
    let layout = make_layout(&inst.partition, inst.clusters.k()).unwrap();
    let codec = Codec::new(&inst.partition, Some(&inst.clusters), layout).unwrap();

    let word = match Codeword::from_bytes(data, layout.total_bits()) {
        Ok(word) => word,
        Err(_) => return,
    };
    match codec.decode(&word) {
        Ok(DecodeOutcome::Exact(block)) => {
            let reencoded = codec.encode(&block).expect("typical block encodes");
            assert_eq!(reencoded, word, "exact decode must re-encode to itself");
        }
        Ok(DecodeOutcome::TypedError { representative, .. }) => {
            let reencoded = codec.encode(&representative).expect("medoid encodes");
            assert_eq!(reencoded, word, "medoid must re-encode to itself");
        }
        Err(_) => {}
    }
});
