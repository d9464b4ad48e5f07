use serde::{Deserialize, Serialize};

use super::RestrictedType;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelSupport {
    /// A matrix model is built by `build_so_pair`.
    Supported,
    /// Classical family without a matrix builder.
    Unsupported,
    /// Exceptional pair, listed for reference only.
    MetadataOnly,
}

/// One row of the rank-one classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogRow {
    pub pair: &'static str,
    pub parameters: &'static str,
    pub riemannian_when: Option<&'static str>,
    pub restricted_type: RestrictedType,
    pub support: ModelSupport,
}

const ROWS: [CatalogRow; 7] = [
    CatalogRow {
        pair: "so(p+1,q+1)/so(p+1,q)",
        parameters: "p >= 0, q >= 0",
        riemannian_when: Some("q = 0"),
        restricted_type: RestrictedType::A1,
        support: ModelSupport::Supported,
    },
    CatalogRow {
        pair: "su(p+1,q+1)/s(u(p+1,q)+u(1))",
        parameters: "p >= 0, q >= 0",
        riemannian_when: Some("q = 0"),
        restricted_type: RestrictedType::BC1,
        support: ModelSupport::Unsupported,
    },
    CatalogRow {
        pair: "sp(p+1,q+1)/sp(p+1,q)+sp(1)",
        parameters: "p >= 0, q >= 0",
        riemannian_when: Some("q = 0"),
        restricted_type: RestrictedType::BC1,
        support: ModelSupport::Unsupported,
    },
    CatalogRow {
        pair: "sl(n+2,R)/gl(n+1,R)",
        parameters: "n >= 0",
        riemannian_when: None,
        restricted_type: RestrictedType::BC1,
        support: ModelSupport::Unsupported,
    },
    CatalogRow {
        pair: "sp(n+2,R)/sp(n+1,R)+sp(1,R)",
        parameters: "n >= 0",
        riemannian_when: None,
        restricted_type: RestrictedType::BC1,
        support: ModelSupport::Unsupported,
    },
    CatalogRow {
        pair: "f4(-20)/so(8,1)",
        parameters: "",
        riemannian_when: None,
        restricted_type: RestrictedType::BC1,
        support: ModelSupport::MetadataOnly,
    },
    CatalogRow {
        pair: "f4(4)/so(5,4)",
        parameters: "",
        riemannian_when: None,
        restricted_type: RestrictedType::BC1,
        support: ModelSupport::MetadataOnly,
    },
];

/// Rank-one semisimple symmetric pairs and their restricted root systems.
pub fn rank_one_catalog() -> &'static [CatalogRow] {
    &ROWS
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seven_rows() {
        let rows = rank_one_catalog();
        assert_eq!(rows.len(), 7);
        assert_eq!(rows[0].restricted_type, RestrictedType::A1);
        assert_eq!(rows[0].support, ModelSupport::Supported);
        assert!(rows[1..].iter().all(|r| r.restricted_type == RestrictedType::BC1));
        assert_eq!(rows[1].support, ModelSupport::Unsupported);
        assert_eq!(rows[5].support, ModelSupport::MetadataOnly);
        assert_eq!(rows[6].support, ModelSupport::MetadataOnly);
    }
}
